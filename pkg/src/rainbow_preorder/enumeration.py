"""Quantifying over colorings of ``K_n``.

Colorings are enumerated up to renaming of colors, i.e. as set partitions of
the lexicographically ordered edge list, each encoded by its restricted-growth
string (first edge gets color 1; every later edge reuses a color or opens the
next one).  Vertex symmetry is not factored out.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterator, Optional, Sequence

from .coloring import EdgeColoring, normalize_colors, num_colors
from .graphs import Graph, in_domain_H, invariants, is_subgraph, pattern_name
from .search import RainbowMatcher, brute_force_find, is_rainbow_free
from .witnesses import WitnessId, WitnessReport, contract_of, minimum_params, validate_witness

__all__ = [
    "IMPLIED_BY_SUBGRAPH",
    "KNOWN_FACT",
    "COUNTEREXAMPLE",
    "NO_COUNTEREXAMPLE_UP_TO",
    "Budget",
    "Verdict",
    "NecessaryConditionReport",
    "FamilyReport",
    "BudgetError",
    "partition_count",
    "iterate_rgs",
    "iterate_colorings",
    "sample_rgs",
    "check_relation",
    "necessary_conditions",
    "refute_via_witness_family",
    "DEFAULT_CEILING",
]

IMPLIED_BY_SUBGRAPH = "IMPLIED_BY_SUBGRAPH"
KNOWN_FACT = "KNOWN_FACT"
COUNTEREXAMPLE = "COUNTEREXAMPLE"
NO_COUNTEREXAMPLE_UP_TO = "NO_COUNTEREXAMPLE_UP_TO"

DEFAULT_CEILING = 2_000_000


class BudgetError(ValueError):
    pass


# ---------------------------------------------------------------------------
# counting and enumeration


@lru_cache(maxsize=None)
def _completions(remaining: int, current_max: int, min_blocks: int) -> int:
    """Restricted-growth completions of ``remaining`` slots ending with >= min_blocks blocks."""
    if remaining == 0:
        return 1 if current_max >= min_blocks else 0
    if current_max + remaining < min_blocks:
        return 0
    return current_max * _completions(remaining - 1, current_max, min_blocks) + _completions(
        remaining - 1, current_max + 1, min_blocks
    )


def partition_count(n_edges: int, min_blocks: int = 1) -> int:
    """Set partitions of ``n_edges`` items into at least ``min_blocks`` blocks."""
    if n_edges == 0:
        return 1 if min_blocks <= 0 else 0
    return _completions(n_edges, 0, min_blocks)


def iterate_rgs(length: int, min_blocks: int = 1, prefix: Sequence[int] = ()) -> Iterator[tuple[int, ...]]:
    """Restricted-growth strings in lexicographic order, optionally under a fixed prefix."""
    a = list(prefix) + [0] * (length - len(prefix))
    m0 = 0
    for i, c in enumerate(prefix):
        if not 1 <= c <= m0 + 1:
            raise ValueError(f"prefix {tuple(prefix)} is not a restricted-growth string")
        m0 = max(m0, c)

    def rec(i: int, m: int):
        if m + (length - i) < min_blocks:
            return
        if i == length:
            yield tuple(a)
            return
        for c in range(1, m + 2):
            a[i] = c
            yield from rec(i + 1, m if c <= m else c)

    if length == 0:
        if min_blocks <= 0:
            yield ()
        return
    yield from rec(len(prefix), m0)


def iterate_colorings(
    n: int,
    min_colors: int = 1,
    visitor: Optional[Callable[[EdgeColoring], object]] = None,
    prefix: Sequence[int] = (),
) -> int:
    """Visit one coloring of ``K_n`` per color-partition with >= ``min_colors`` classes.

    A truthy return from ``visitor`` stops the scan.  Returns the number of
    colorings visited (the stopping one included).
    """
    n_edges = n * (n - 1) // 2
    if n < 2:
        raise ValueError("need n >= 2")
    if min_colors > n_edges:
        raise ValueError(f"K_{n} has only {n_edges} edges, cannot use {min_colors} colors")
    count = 0
    trusted = EdgeColoring._trusted
    for colors in iterate_rgs(n_edges, min_colors, prefix):
        count += 1
        if visitor is not None and visitor(trusted(n, colors)):
            break
    return count


def sample_rgs(length: int, min_blocks: int, rng: random.Random) -> tuple[int, ...]:
    """Uniform restricted-growth string with at least ``min_blocks`` blocks (exact unranking)."""
    total = _completions(length, 0, min_blocks)
    if total == 0:
        raise ValueError("no such partition")
    x = rng.randrange(total)
    out = []
    m = 0
    for i in range(length):
        rest = length - i - 1
        old = _completions(rest, m, min_blocks) if m else 0
        if x < m * old:
            q, x = divmod(x, old)
            out.append(q + 1)
        else:
            x -= m * old
            m += 1
            out.append(m)
    return tuple(out)


# ---------------------------------------------------------------------------
# verdicts


@dataclass(frozen=True)
class Budget:
    """``exhaustive=True`` forces full scans; otherwise scan fully up to ``ceiling``
    colorings per host order and sample ``samples`` colorings beyond it."""

    exhaustive: bool = False
    samples: int = 0
    seed: int = 0
    ceiling: int = DEFAULT_CEILING
    jobs: int = 1

    def __post_init__(self):
        if self.samples < 0 or self.ceiling < 0 or self.jobs < 1:
            raise BudgetError("samples/ceiling must be >= 0 and jobs >= 1")
        if self.exhaustive and self.samples:
            raise BudgetError("choose either exhaustive or a sample count, not both")


@dataclass
class Verdict:
    kind: str
    h1: str
    h2: str
    max_n: int
    min_colors: int
    mode: str = ""
    seed: Optional[int] = None
    scanned: int = 0
    per_order: list = field(default_factory=list)
    witness: Optional[EdgeColoring] = None
    fact_ref: Optional[str] = None

    def to_json(self) -> dict:
        out = {
            "kind": self.kind,
            "h1": self.h1,
            "h2": self.h2,
            "bound": {"max_n": self.max_n, "min_colors": self.min_colors, "mode": self.mode},
            "seed": self.seed,
            "scanned": self.scanned,
            "per_order": self.per_order,
            "fact_ref": self.fact_ref,
            "witness": None,
        }
        if self.witness is not None:
            out["witness"] = normalize_colors(self.witness).to_json()
        return out

    @classmethod
    def from_json(cls, data: dict) -> "Verdict":
        from .coloring import coloring_from_json

        w = data.get("witness")
        return cls(
            kind=data["kind"],
            h1=data["h1"],
            h2=data["h2"],
            max_n=data["bound"]["max_n"],
            min_colors=data["bound"]["min_colors"],
            mode=data["bound"]["mode"],
            seed=data.get("seed"),
            scanned=data.get("scanned", 0),
            per_order=list(data.get("per_order", [])),
            witness=coloring_from_json(w) if w else None,
            fact_ref=data.get("fact_ref"),
        )


def _counterexample_ok(kc: EdgeColoring, h1: Graph, h2: Graph, min_colors: int) -> bool:
    return is_rainbow_free(kc, h1) and not is_rainbow_free(kc, h2) and num_colors(kc) >= min_colors


def revalidate_counterexample(v: Verdict, h1: Graph, h2: Graph, oracle: bool = False) -> bool:
    """Recheck a COUNTEREXAMPLE witness; ``oracle`` uses the exhaustive scan instead."""
    kc = v.witness
    if kc is None:
        return False
    if oracle:
        return (
            brute_force_find(kc, h1) is None
            and brute_force_find(kc, h2) is not None
            and num_colors(kc) >= v.min_colors
        )
    return _counterexample_ok(kc, h1, h2, v.min_colors)


def _scan_exhaustive(m1: RainbowMatcher, m2: RainbowMatcher, n: int, b: int, prefix=()):
    found = None
    h1_fits = m1.k <= n  # a pattern larger than the host is never present

    def visit(kc: EdgeColoring) -> bool:
        nonlocal found
        mat = kc.matrix
        if h1_fits and m1._run(mat, n) is not None:
            return False
        if m2._run(mat, n) is not None:
            found = kc.colors
            return True
        return False

    count = iterate_colorings(n, b, visit, prefix)
    return count, found


def _scan_prefix_worker(args):
    h1_edges, h1_verts, h2_edges, h2_verts, n, b, prefix = args
    m1 = RainbowMatcher(Graph.from_edges(h1_edges, h1_verts))
    m2 = RainbowMatcher(Graph.from_edges(h2_edges, h2_verts))
    return _scan_exhaustive(m1, m2, n, b, prefix)


def _prefixes(length: int, b: int, want: int) -> list[tuple[int, ...]]:
    depth = 1
    while depth < length:
        pre = [p for p in iterate_rgs(depth, 0) if _completions(length - depth, max(p), b) > 0]
        if len(pre) >= want:
            return pre
        depth += 1
    return [p for p in iterate_rgs(length, b)]


def _scan_parallel(h1: Graph, h2: Graph, n: int, b: int, jobs: int):
    n_edges = n * (n - 1) // 2
    prefixes = _prefixes(n_edges, b, 4 * jobs)
    payload = [
        (sorted(h1.edges), h1.vertices, sorted(h2.edges), h2.vertices, n, b, p) for p in prefixes
    ]
    total = 0
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        # results come back in prefix order, so the first hit is the sequential one
        for count, found in pool.map(_scan_prefix_worker, payload):
            total += count
            if found is not None:
                return total, found
    return total, None


def check_relation(
    h1: Graph,
    h2: Graph,
    max_n: int,
    min_colors: int = 1,
    budget: Budget = Budget(),
    ledger=None,
) -> Verdict:
    """Look for a rainbow-``h1``-free coloring containing a rainbow ``h2``.

    Hosts ``K_m`` for ``|V(h2)| <= m <= max_n`` are scanned in increasing
    order, colorings with fewer than ``min_colors`` colors skipped.  Finding
    nothing never asserts ``h1 <= h2``; it only reports the bound searched.
    """
    if not (in_domain_H(h1) and in_domain_H(h2)):
        raise ValueError("both patterns must be connected and not one of P1..P4")
    if max_n < h2.order:
        raise BudgetError(f"max_n={max_n} is smaller than |V(h2)|={h2.order}")
    if min_colors < 1:
        raise BudgetError("min_colors must be >= 1")
    name1, name2 = pattern_name(h1), pattern_name(h2)
    base = dict(h1=name1, h2=name2, max_n=max_n, min_colors=min_colors)
    if is_subgraph(h1, h2):
        return Verdict(IMPLIED_BY_SUBGRAPH, mode="none", **base)
    if ledger is not None:
        fact = ledger.lookup(h1, h2)
        if fact is not None and fact.relation == "LE":
            return Verdict(KNOWN_FACT, mode="none", fact_ref=fact.key, **base)

    m1, m2 = RainbowMatcher(h1), RainbowMatcher(h2)
    rng = random.Random(budget.seed)
    sampled_any = False
    modes = []
    per_order = []
    scanned = 0
    for n in range(h2.order, max_n + 1):
        n_edges = n * (n - 1) // 2
        if min_colors > n_edges:
            per_order.append({"n": n, "mode": "skipped", "scanned": 0})
            continue
        space = partition_count(n_edges, min_colors)
        if budget.exhaustive or space <= budget.ceiling:
            if budget.jobs > 1:
                count, found = _scan_parallel(h1, h2, n, min_colors, budget.jobs)
            else:
                count, found = _scan_exhaustive(m1, m2, n, min_colors)
            mode = "exhaustive"
        else:
            if budget.samples <= 0:
                raise BudgetError(
                    f"K_{n} has {space} colorings (> ceiling {budget.ceiling}); give a sample count"
                )
            sampled_any = True
            count, found = 0, None
            trusted = EdgeColoring._trusted
            for _ in range(budget.samples):
                colors = sample_rgs(n_edges, min_colors, rng)
                count += 1
                mat = trusted(n, colors).matrix
                if (m1.k > n or m1._run(mat, n) is None) and m2._run(mat, n) is not None:
                    found = colors
                    break
            mode = f"sampled({budget.samples})"
        modes.append(mode)
        scanned += count
        per_order.append({"n": n, "mode": mode, "scanned": count, "space": space})
        if found is not None:
            kc = EdgeColoring(n, found)
            if not _counterexample_ok(kc, h1, h2, min_colors):
                raise AssertionError("counterexample failed re-validation")
            return Verdict(
                COUNTEREXAMPLE,
                mode=_mode_label(modes),
                seed=budget.seed if sampled_any else None,
                scanned=scanned,
                per_order=per_order,
                witness=kc,
                **base,
            )
    return Verdict(
        NO_COUNTEREXAMPLE_UP_TO,
        mode=_mode_label(modes),
        seed=budget.seed if sampled_any else None,
        scanned=scanned,
        per_order=per_order,
        **base,
    )


def _mode_label(modes: list[str]) -> str:
    distinct = sorted(set(modes))
    if not distinct:
        return "none"
    return distinct[0] if len(distinct) == 1 else "mixed"


# ---------------------------------------------------------------------------
# necessary conditions


@dataclass(frozen=True)
class NecessaryConditionReport:
    edges: tuple[int, int]
    vertices: tuple[int, int]
    max_degree: tuple[int, int]
    dimension: tuple[int, int]
    edges_ok: bool
    vertices_ok: bool
    maxdeg_ok: bool
    dim_ok: bool
    top_degree_count_ok: Optional[bool] = None
    top_degree_adjacent_ok: Optional[bool] = None

    @property
    def all_ok(self) -> bool:
        flags = [self.edges_ok, self.vertices_ok, self.maxdeg_ok, self.dim_ok]
        flags += [f for f in (self.top_degree_count_ok, self.top_degree_adjacent_ok) if f is not None]
        return all(flags)

    def to_json(self) -> dict:
        return {
            "edges": list(self.edges),
            "vertices": list(self.vertices),
            "max_degree": list(self.max_degree),
            "dimension": list(self.dimension),
            "edges_ok": self.edges_ok,
            "vertices_ok": self.vertices_ok,
            "maxdeg_ok": self.maxdeg_ok,
            "dim_ok": self.dim_ok,
            "top_degree_count_ok": self.top_degree_count_ok,
            "top_degree_adjacent_ok": self.top_degree_adjacent_ok,
            "all_ok": self.all_ok,
        }


def necessary_conditions(h1: Graph, h2: Graph, refined: bool = False) -> NecessaryConditionReport:
    """Size/order/degree/dimension inequalities every true ``h1 <= h2`` satisfies.

    With ``refined``, and when ``Δ(h1) = Δ(h2)+1``, also require at most two
    vertices of that degree in ``h1`` and, if two, that they are adjacent.
    """
    a, b = invariants(h1), invariants(h2)
    count_ok = adj_ok = None
    if refined:
        count_ok = adj_ok = True
        if a.max_degree == b.max_degree + 1:
            top = [v for v in h1.vertices if h1.degree(v) == a.max_degree]
            count_ok = len(top) <= 2
            adj_ok = len(top) != 2 or top[1] in h1.neighbors(top[0])
    return NecessaryConditionReport(
        edges=(a.size, b.size),
        vertices=(a.order, b.order),
        max_degree=(a.max_degree, b.max_degree),
        dimension=(a.dimension, b.dimension),
        edges_ok=a.size <= b.size + 1,
        vertices_ok=a.order <= b.order + 2,
        maxdeg_ok=a.max_degree <= b.max_degree + 1,
        dim_ok=a.dimension <= b.dimension,
        top_degree_count_ok=count_ok,
        top_degree_adjacent_ok=adj_ok,
    )


# ---------------------------------------------------------------------------
# witness families


@dataclass
class FamilyReport:
    name: str
    free_of: tuple[str, ...]
    contains: tuple[str, ...]
    reports: list[WitnessReport]

    @property
    def passed(self) -> bool:
        return bool(self.reports) and all(r.passed for r in self.reports)

    def to_json(self) -> dict:
        return {
            "witness": self.name,
            "free_of": list(self.free_of),
            "contains": list(self.contains),
            "passed": self.passed,
            "t_values": [r.witness.t for r in self.reports],
            "reports": [r.to_json() for r in self.reports],
        }


def refute_via_witness_family(
    name: str, t_values: Sequence[int], k: Optional[int] = None, pattern=None
) -> FamilyReport:
    """Validate the construction at every ``t``; all passing shows no threshold in
    ``t_values`` makes the contract's pair a relation."""
    base = minimum_params(name, k, pattern)
    reports = [validate_witness(WitnessId(name, t, base.k, base.pattern)) for t in t_values]
    contract = contract_of(base)
    return FamilyReport(name, contract.must_be_free_of, contract.must_contain_rainbow, reports)
