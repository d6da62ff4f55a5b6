"""Flat JSON file of relation-check verdicts.

Records are keyed by the canonical forms of both patterns plus the search
bound, so isomorphic specs (``P5`` and an edge list of a 5-path) share an
entry.  The default location can be overridden with ``RAINBOW_PREORDER_CACHE``.
"""

from __future__ import annotations

import json
import os
from pathlib import Path
from typing import Iterator, Optional

from .enumeration import Verdict
from .graphs import Graph, canonical_key

__all__ = ["VerdictCache", "cache_key", "default_cache_path", "CACHE_ENV"]

CACHE_ENV = "RAINBOW_PREORDER_CACHE"


def default_cache_path() -> Path:
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "rainbow_preorder" / "verdicts.json"


def cache_key(h1: Graph, h2: Graph, max_n: int, min_colors: int, mode: str, seed: Optional[int]) -> str:
    return "|".join([canonical_key(h1), canonical_key(h2), str(max_n), str(min_colors), mode, str(seed)])


class VerdictCache:
    def __init__(self, path=None):
        self.path = Path(path) if path is not None else default_cache_path()
        self.records: dict[str, dict] = {}
        if self.path.exists():
            with open(self.path) as fh:
                data = json.load(fh)
            self.records = dict(data.get("records", {}))

    def get(self, key: str) -> Optional[Verdict]:
        rec = self.records.get(key)
        return Verdict.from_json(rec["verdict"]) if rec else None

    def get_raw(self, key: str) -> Optional[dict]:
        rec = self.records.get(key)
        return rec["verdict"] if rec else None

    def put(self, key: str, h1: Graph, h2: Graph, verdict: Verdict) -> None:
        self.records[key] = {
            "h1": canonical_key(h1),
            "h2": canonical_key(h2),
            "verdict": verdict.to_json(),
        }

    def save(self) -> None:
        self.path.parent.mkdir(parents=True, exist_ok=True)
        tmp = self.path.with_suffix(self.path.suffix + ".tmp")
        with open(tmp, "w") as fh:
            json.dump({"version": 1, "records": self.records}, fh, indent=1, sort_keys=True)
            fh.write("\n")
        os.replace(tmp, self.path)

    def for_pair(self, k1: str, k2: str) -> Iterator[Verdict]:
        """Cached verdicts for the ordered pair of canonical keys, in key order."""
        for key in sorted(self.records):
            rec = self.records[key]
            if rec["h1"] == k1 and rec["h2"] == k2:
                yield Verdict.from_json(rec["verdict"])

    def __len__(self) -> int:
        return len(self.records)
