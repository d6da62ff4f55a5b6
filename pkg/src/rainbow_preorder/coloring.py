"""Edge-colored complete graphs ``(K_n, c)``.

Colors live in a flat tuple indexed by the lexicographic order of the pairs
``(1,2), (1,3), ..., (1,n), (2,3), ...``.  That is the same order the
restricted-growth enumeration in :mod:`rainbow_preorder.enumeration` uses, so a
growth string *is* a color tuple.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping

__all__ = [
    "EdgeColoring",
    "ColorStats",
    "ColoringError",
    "edge_index",
    "edge_list",
    "num_colors",
    "color_degree",
    "color_stats",
    "is_rainbow_edge_set",
    "normalize_colors",
    "load_coloring",
    "dump_coloring",
]


class ColoringError(ValueError):
    pass


def edge_list(n: int) -> list[tuple[int, int]]:
    return [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1)]


def edge_index(n: int, u: int, v: int) -> int:
    if u > v:
        u, v = v, u
    if not (1 <= u < v <= n):
        raise ColoringError(f"({u}, {v}) is not an edge of K_{n}")
    return (u - 1) * (2 * n - u) // 2 + (v - u - 1)


@dataclass(frozen=True)
class EdgeColoring:
    n: int
    colors: tuple[int, ...]
    _matrix: list = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if self.n < 0:
            raise ColoringError("n must be non-negative")
        colors = tuple(self.colors)
        if len(colors) != self.n * (self.n - 1) // 2:
            raise ColoringError(
                f"K_{self.n} has {self.n * (self.n - 1) // 2} edges, got {len(colors)} colors"
            )
        if any(not isinstance(c, int) or isinstance(c, bool) or c < 1 for c in colors):
            raise ColoringError("colors must be positive integers")
        object.__setattr__(self, "colors", colors)

    @classmethod
    def _trusted(cls, n: int, colors: tuple[int, ...]) -> "EdgeColoring":
        # skips validation; callers guarantee a positive tuple of the right length
        obj = object.__new__(cls)
        object.__setattr__(obj, "n", n)
        object.__setattr__(obj, "colors", colors)
        object.__setattr__(obj, "_matrix", None)
        return obj

    @classmethod
    def from_function(cls, n: int, color_of) -> "EdgeColoring":
        return cls(n, tuple(color_of(u, v) for u, v in edge_list(n)))

    @classmethod
    def from_mapping(cls, n: int, mapping: Mapping[tuple[int, int], int]) -> "EdgeColoring":
        colors = []
        for u, v in edge_list(n):
            c = mapping.get((u, v), mapping.get((v, u)))
            if c is None:
                raise ColoringError(f"edge ({u}, {v}) has no color")
            colors.append(c)
        return cls(n, tuple(colors))

    @property
    def matrix(self) -> list[list[int]]:
        """``matrix[u][v]`` is the color of ``uv`` (1-based, diagonal 0)."""
        mat = self._matrix
        if mat is None:
            n = self.n
            mat = [[0] * (n + 1) for _ in range(n + 1)]
            it = iter(self.colors)
            for u in range(1, n + 1):
                row = mat[u]
                for v in range(u + 1, n + 1):
                    c = next(it)
                    row[v] = c
                    mat[v][u] = c
            object.__setattr__(self, "_matrix", mat)
        return mat

    def color(self, u: int, v: int) -> int:
        return self.colors[edge_index(self.n, u, v)]

    def items(self):
        return zip(edge_list(self.n), self.colors)

    def recolor(self, u: int, v: int, c: int) -> "EdgeColoring":
        colors = list(self.colors)
        colors[edge_index(self.n, u, v)] = c
        return EdgeColoring(self.n, tuple(colors))

    def to_json(self) -> dict:
        return {"n": self.n, "colors": [[u, v, c] for (u, v), c in self.items()]}


@dataclass(frozen=True)
class ColorStats:
    num_colors: int
    color_degree: dict[int, int]
    max_color_degree: int


def num_colors(kc: EdgeColoring) -> int:
    return len(set(kc.colors))


def color_degree(kc: EdgeColoring, v: int) -> int:
    """Number of distinct colors on edges at ``v``."""
    if not 1 <= v <= kc.n:
        raise ColoringError(f"vertex {v} outside 1..{kc.n}")
    row = kc.matrix[v]
    return len({row[u] for u in range(1, kc.n + 1) if u != v})


def color_stats(kc: EdgeColoring) -> ColorStats:
    degs = {v: color_degree(kc, v) for v in range(1, kc.n + 1)}
    return ColorStats(num_colors(kc), degs, max(degs.values(), default=0))


def is_rainbow_edge_set(kc: EdgeColoring, edges: Iterable[tuple[int, int]]) -> bool:
    seen = set()
    for u, v in edges:
        c = kc.color(u, v)
        if c in seen:
            return False
        seen.add(c)
    return True


def normalize_colors(kc: EdgeColoring) -> EdgeColoring:
    """Rename colors to ``1..t`` by first appearance in lexicographic edge order."""
    rename: dict[int, int] = {}
    out = []
    for c in kc.colors:
        if c not in rename:
            rename[c] = len(rename) + 1
        out.append(rename[c])
    return EdgeColoring._trusted(kc.n, tuple(out))


def coloring_from_json(data: dict) -> EdgeColoring:
    try:
        n = int(data["n"])
        triples = data["colors"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ColoringError(f"malformed coloring JSON: {exc}") from None
    mapping: dict[tuple[int, int], int] = {}
    for entry in triples:
        u, v, c = (int(x) for x in entry)
        key = (min(u, v), max(u, v))
        if u == v or not (1 <= key[0] and key[1] <= n):
            raise ColoringError(f"({u}, {v}) is not an edge of K_{n}")
        if key in mapping:
            raise ColoringError(f"edge {key} listed twice")
        mapping[key] = c
    return EdgeColoring.from_mapping(n, mapping)


def load_coloring(path) -> EdgeColoring:
    with open(path) as fh:
        return coloring_from_json(json.load(fh))


def dump_coloring(kc: EdgeColoring, path=None, extra: dict | None = None) -> str:
    """Serialise the normalised coloring; optional ``extra`` keys are merged in first."""
    payload = dict(extra or {})
    payload.update(normalize_colors(kc).to_json())
    text = json.dumps(payload, sort_keys=False)
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    return text
