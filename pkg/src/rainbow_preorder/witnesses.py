"""Explicit colorings from the non-relation proofs, with their contracts.

Each construction is a coloring of a complete graph that avoids a rainbow
``H1`` while containing a rainbow ``H2`` (and, where relevant, uses exactly
``t`` colors).  Vertex numbering is frozen per construction:

* core vertices first, in the order their names are introduced
  (``x0`` before ``x1`` when an ``x0`` exists, then ``y``, ``z`` singletons);
* then the pendant pairs, all ``y_j`` in increasing ``j`` followed by all
  ``z_j`` in increasing ``j``.

So for ``thm8-parity`` with ``k=5, t=7`` the hosts labels are
``x1..x5 = 1..5``, ``y6, y7 = 6, 7`` and ``z6, z7 = 8, 9``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Union

from .coloring import EdgeColoring, num_colors
from .graphs import Graph, invariants, make_pattern, pattern_name
from .search import find_rainbow_embedding, is_rainbow_free, validate_embedding

__all__ = [
    "WITNESS_NAMES",
    "WitnessId",
    "WitnessContract",
    "WitnessReport",
    "WitnessParamError",
    "build_witness",
    "contract_of",
    "validate_witness",
    "minimum_params",
    "bfs_labelling",
    "removable_edge",
    "planted_embedding",
]


class WitnessParamError(ValueError):
    """Parameters outside the range the construction is defined for."""


@dataclass(frozen=True)
class WitnessId:
    name: str
    t: int
    k: Optional[int] = None
    pattern: Union[str, Graph, None] = None

    def pattern_graph(self) -> Graph:
        if self.pattern is None:
            raise WitnessParamError(f"{self.name} needs a pattern argument")
        if isinstance(self.pattern, Graph):
            return self.pattern
        return make_pattern(self.pattern)

    def params(self) -> dict:
        out: dict = {"t": self.t}
        if self.k is not None:
            out["k"] = self.k
        if self.pattern is not None:
            if isinstance(self.pattern, Graph):
                out["pattern"] = "edges:[" + ",".join(f"({u},{v})" for u, v in self.pattern.sorted_edges()) + "]"
            else:
                out["pattern"] = self.pattern
        return out

    def label(self) -> str:
        bits = [f"{k}={v}" for k, v in self.params().items()]
        return f"{self.name}(" + ", ".join(bits) + ")"


@dataclass(frozen=True)
class WitnessContract:
    must_be_free_of: tuple[str, ...]
    must_contain_rainbow: tuple[str, ...]
    color_count: int


@dataclass
class ClauseResult:
    kind: str  # "free" | "contains"
    pattern: str
    passed: bool
    embedding: Optional[dict[int, int]] = None

    def to_json(self) -> dict:
        out = {"kind": self.kind, "pattern": self.pattern, "passed": self.passed}
        if self.embedding is not None:
            out["embedding"] = {str(k): v for k, v in sorted(self.embedding.items())}
        return out


@dataclass
class WitnessReport:
    witness: WitnessId
    clauses: list[ClauseResult] = field(default_factory=list)
    expected_colors: int = 0
    actual_colors: int = 0
    error: Optional[str] = None

    @property
    def passed(self) -> bool:
        return (
            self.error is None
            and all(c.passed for c in self.clauses)
            and self.expected_colors == self.actual_colors
        )

    def summary(self) -> str:
        if self.error is not None:
            return f"{self.witness.label()}: INVALID ({self.error})"
        parts = []
        for c in self.clauses:
            verb = "FREE of" if c.kind == "free" else "CONTAINS"
            mark = "" if c.passed else " [FAIL]"
            parts.append(f"{verb} {c.pattern}{mark}")
        colors = f"colors {self.actual_colors}/{self.expected_colors}"
        return f"{self.witness.label()}: " + "; ".join(parts) + f"; {colors}; " + ("PASS" if self.passed else "FAIL")

    def to_json(self) -> dict:
        return {
            "witness": self.witness.name,
            "params": self.witness.params(),
            "passed": self.passed,
            "error": self.error,
            "expected_colors": self.expected_colors,
            "actual_colors": self.actual_colors,
            "clauses": [c.to_json() for c in self.clauses],
        }


# ---------------------------------------------------------------------------
# helpers


class _Builder:
    """Collects named vertices and explicit edge colors, default color elsewhere."""

    def __init__(self):
        self.index: dict[str, int] = {}
        self.explicit: dict[tuple[int, int], int] = {}

    def add(self, *names: str) -> None:
        for name in names:
            if name in self.index:
                raise AssertionError(f"vertex {name} added twice")
            self.index[name] = len(self.index) + 1

    def set(self, a: str, b: str, color: int) -> None:
        u, v = self.index[a], self.index[b]
        key = (min(u, v), max(u, v))
        if key in self.explicit and self.explicit[key] != color:
            raise AssertionError(f"conflicting colors on {a}{b}")
        self.explicit[key] = color

    def pendant_pairs(self, lo: int, hi: int) -> None:
        self.add(*(f"y{j}" for j in range(lo, hi + 1)))
        self.add(*(f"z{j}" for j in range(lo, hi + 1)))
        for j in range(lo, hi + 1):
            self.set(f"y{j}", f"z{j}", j)

    def done(self, default: int | Callable[[int, int], int]) -> EdgeColoring:
        n = len(self.index)
        if callable(default):
            fill = default
        else:
            fill = lambda u, v: default  # noqa: E731
        return EdgeColoring.from_function(n, lambda u, v: self.explicit.get((u, v)) or fill(u, v))


def _need(cond: bool, msg: str) -> None:
    if not cond:
        raise WitnessParamError(msg)


def bfs_labelling(tree: Graph, root: Optional[int] = None) -> list[int]:
    """Tree vertices in BFS order from ``root`` (default: smallest label), children ascending."""
    root = tree.vertices[0] if root is None else root
    order, seen = [root], {root}
    i = 0
    while i < len(order):
        for y in sorted(tree.neighbors(order[i])):
            if y not in seen:
                seen.add(y)
                order.append(y)
        i += 1
    return order


def _bridges(g: Graph) -> set[tuple[int, int]]:
    disc: dict[int, int] = {}
    low: dict[int, int] = {}
    out: set[tuple[int, int]] = set()
    counter = [0]

    def dfs(v: int, parent: Optional[int]) -> None:
        disc[v] = low[v] = counter[0]
        counter[0] += 1
        for w in sorted(g.neighbors(v)):
            if w == parent:
                continue
            if w in disc:
                low[v] = min(low[v], disc[w])
            else:
                dfs(w, v)
                low[v] = min(low[v], low[w])
                if low[w] > disc[v]:
                    out.add((min(v, w), max(v, w)))

    for v in g.vertices:
        if v not in disc:
            dfs(v, None)
    return out


def removable_edge(g: Graph) -> Optional[tuple[int, int]]:
    """Lexicographically first edge lying on a cycle (None for forests)."""
    bridges = _bridges(g)
    for e in g.sorted_edges():
        if e not in bridges:
            return e
    return None


# ---------------------------------------------------------------------------
# constructions


def _lemma1(w: WitnessId) -> EdgeColoring:
    t = w.t
    b = _Builder()
    b.add(*(f"x{i}" for i in range(1, t)))
    b.add(*(f"y{i}" for i in range(1, t)))
    for i in range(1, t):
        b.set(f"x{i}", f"y{i}", i)
    return b.done(t)


def _thm3(w: WitnessId) -> EdgeColoring:
    h2 = w.pattern_graph()
    t, m = w.t, h2.size
    b = _Builder()
    b.add(*(f"x{v}" for v in h2.vertices))
    first = removable_edge(h2)
    ordered = h2.sorted_edges()
    if first is not None:
        ordered.remove(first)
        ordered.insert(0, first)
    for i, (u, v) in enumerate(ordered, start=1):
        b.set(f"x{u}", f"x{v}", i)
    b.pendant_pairs(m + 1, t)
    return b.done(1)


def _thm4(w: WitnessId) -> EdgeColoring:
    t = w.t
    # x0 and x_{n+1..t} are fresh; x_1..x_n are the tree vertices in BFS order
    return EdgeColoring.from_function(t + 1, lambda u, v: max(u, v) - 1)


def _thm8(w: WitnessId) -> EdgeColoring:
    k, t = w.k, w.t
    b = _Builder()
    b.add(*(f"x{i}" for i in range(1, k + 1)))
    for i in range(1, k + 1):
        for j in range(i + 1, k + 1):
            b.set(f"x{i}", f"x{j}", 1 if (i - j) % 2 == 0 else j)
    b.pendant_pairs(k + 1, t)
    return b.done(1)


def _thm9(w: WitnessId) -> EdgeColoring:
    k, t = w.k, w.t
    b = _Builder()
    b.add(*(f"x{i}" for i in range(t)))
    for i in range(1, k - 3):
        b.set(f"x{i - 1}", f"x{i}", i)
    for j in range(k - 3, t):
        b.set("x0", f"x{j}", j)
    return b.done(t)


def _cycle_plus_pairs(length: int, t: int, default: int) -> EdgeColoring:
    b = _Builder()
    b.add(*(f"x{i}" for i in range(1, length + 1)))
    for i in range(1, length + 1):
        b.set(f"x{i}", f"x{i % length + 1}", i)
    b.pendant_pairs(length + 1, t)
    return b.done(default)


def _thm12(w: WitnessId) -> EdgeColoring:
    return _cycle_plus_pairs(4, w.t, 1)


def _thm13(w: WitnessId) -> EdgeColoring:
    return _cycle_plus_pairs(w.k, w.t, 1)


def _star_center(count: int, t: int, default: int, extra: tuple[str, ...] = ()) -> _Builder:
    b = _Builder()
    b.add(*(f"x{i}" for i in range(count + 1)))
    b.add(*extra)
    for i in range(1, count + 1):
        b.set("x0", f"x{i}", i)
    return b


def _thm14_1(w: WitnessId) -> EdgeColoring:
    t = w.t
    b = _star_center(t - 2, t, t, ("y", "z"))
    b.set("y", "z", t - 1)
    return b.done(t)


def _thm14_2(w: WitnessId) -> EdgeColoring:
    t = w.t
    b = _star_center(t - 2, t, t, ("y",))
    b.set(f"x{t - 2}", "y", t - 1)
    return b.done(t)


def _path_core(length: int) -> _Builder:
    b = _Builder()
    b.add(*(f"x{i}" for i in range(1, length + 1)))
    for i in range(1, length):
        b.set(f"x{i}", f"x{i + 1}", i)
    return b


def _thm14_3(w: WitnessId) -> EdgeColoring:
    b = _path_core(6)
    b.pendant_pairs(6, w.t)
    return b.done(2)


def _thm14_4(w: WitnessId) -> EdgeColoring:
    t = w.t
    b = _path_core(6)
    b.add(*(f"y{j}" for j in range(6, t + 1)))
    for j in range(6, t + 1):
        b.set("x2", f"y{j}", j)
    return b.done(3)


def _star_rest(w: WitnessId) -> EdgeColoring:
    # x0..x_{t-1}; x0x_i gets i, everything else t
    t = w.t
    return _star_center(t - 1, t, t).done(t)


def _thm17_2(w: WitnessId) -> EdgeColoring:
    b = _path_core(5)
    b.pendant_pairs(5, w.t)
    return b.done(2)


def _thm17_4(w: WitnessId) -> EdgeColoring:
    t = w.t
    return _star_center(t, t, 1).done(1)


# ---------------------------------------------------------------------------
# registry


def _check_lemma1(w):
    _need(w.t >= 3, "lemma1-matching needs t >= 3")


def _check_thm3(w):
    h2 = w.pattern_graph()
    _need(h2.is_connected(), "thm3-planted needs a connected pattern")
    _need(w.t >= h2.size + 1, f"thm3-planted needs t >= |E(H2)|+1 = {h2.size + 1}")


def _check_thm4(w):
    tree = w.pattern_graph()
    _need(invariants(tree).is_tree, "thm4-bfsmax needs a tree argument")
    _need(w.t >= tree.order, f"thm4-bfsmax needs t >= |V(T)| = {tree.order}")


def _check_thm8(w):
    _need(w.k is not None and w.k >= 3 and w.k % 2 == 1, "thm8-parity needs odd k >= 3")
    _need(w.t >= w.k, "thm8-parity needs t >= k")


def _check_thm9(w):
    _need(w.k is not None and w.k >= 5, "thm9-shortpath needs k >= 5")
    _need(w.t >= w.k - 2, "thm9-shortpath needs t >= k-2")


def _check_thm13(w):
    _need(w.k in (3, 4, 5), "thm13-cyclependants needs k in {3, 4, 5}")
    _need(w.t >= w.k, "thm13-cyclependants needs t >= k")


def _check_lemma16(w):
    _need(w.k is not None and w.k >= 2, "lemma16-star needs k >= 2")
    _need(w.t >= w.k + 1, "lemma16-star needs t >= k+1")


def _check_thm18(w):
    _need(w.k is not None and w.k >= 3, "thm18-star needs k >= 3")
    _need(w.t >= w.k + 1, "thm18-star needs t >= k+1")


def _min_t(name: str, lo: int):
    def check(w):
        _need(w.t >= lo, f"{name} needs t >= {lo}")

    return check


def _contract_thm3(w):
    h2 = w.pattern_graph()
    inv = invariants(h2)
    return (f"P{h2.size + 3}", f"K1,{inv.max_degree + 2}"), (_spec(w),)


def _contract_thm4(w):
    return tuple(f"C{j}" for j in range(3, w.t + 2)), (_spec(w),)


def _spec(w: WitnessId) -> str:
    if isinstance(w.pattern, str):
        return w.pattern
    return pattern_name(w.pattern_graph())


# name -> (param check, builder, contract(free, contains), minimal params for the grid)
_REGISTRY: dict[str, tuple] = {
    "lemma1-matching": (_check_lemma1, _lemma1, lambda w: (("K1,3", "P5", "C3", "C4"), ()), {"t": 3}),
    "thm3-planted": (_check_thm3, _thm3, _contract_thm3, {"pattern": "C4"}),
    "thm4-bfsmax": (_check_thm4, _thm4, _contract_thm4, {"pattern": "K1,3"}),
    "thm8-parity": (_check_thm8, _thm8, lambda w: (("C4",), (f"C{w.k}",)), {"k": 5}),
    "thm9-shortpath": (_check_thm9, _thm9, lambda w: ((f"P{w.k}",), (f"C{w.k - 2}",)), {"k": 5}),
    "thm12-s311c4": (_min_t("thm12-s311c4", 4), _thm12, lambda w: (("S3,1,1",), ("C4",)), {"t": 4}),
    "thm13-cyclependants": (_check_thm13, _thm13, lambda w: (("B",), (f"C{w.k}",)), {"k": 3}),
    "thm14-1-star-yz": (_min_t("thm14-1-star-yz", 5), _thm14_1, lambda w: (("S2,2,1",), ("S3,1,1",)), {"t": 5}),
    "thm14-2-star-broom": (_min_t("thm14-2-star-broom", 6), _thm14_2, lambda w: (("P6",), ("S3,1,1",)), {"t": 6}),
    "thm14-3-path-fill2": (_min_t("thm14-3-path-fill2", 5), _thm14_3, lambda w: (("S3,1,1",), ("P6",)), {"t": 5}),
    "thm14-4-path-starfill3": (_min_t("thm14-4-path-starfill3", 5), _thm14_4, lambda w: (("S2,2,1",), ("P6",)), {"t": 5}),
    "lemma16-star": (_check_lemma16, _star_rest, lambda w: (("P5",), (f"K1,{w.k}+e",)), {"k": 2}),
    "thm17-2-path-pendants": (_min_t("thm17-2-path-pendants", 4), _thm17_2, lambda w: (("K1,4", "P6", "B"), ("P5",)), {"t": 4}),
    "thm17-3-star": (_min_t("thm17-3-star", 3), _star_rest, lambda w: (("C4", "P5", "B"), ("C3",)), {"t": 3}),
    "thm17-4-star-fill1": (_min_t("thm17-4-star-fill1", 4), _thm17_4, lambda w: (("P5", "B"), ("K1,4",)), {"t": 4}),
    "thm18-star": (_check_thm18, _star_rest, lambda w: (("P5", "B"), (f"K1,{w.k}",)), {"k": 3}),
}

WITNESS_NAMES: tuple[str, ...] = tuple(_REGISTRY)


def _entry(w: WitnessId):
    try:
        return _REGISTRY[w.name]
    except KeyError:
        raise WitnessParamError(f"unknown witness id {w.name!r}") from None


def minimum_params(name: str, k: Optional[int] = None, pattern=None) -> WitnessId:
    """Smallest admissible ``t`` for ``name`` at the given (or default) ``k``/pattern."""
    if name not in _REGISTRY:
        raise WitnessParamError(f"unknown witness id {name!r}")
    defaults = _REGISTRY[name][3]
    k = defaults.get("k") if k is None else k
    pattern = defaults.get("pattern") if pattern is None else pattern
    for t in range(1, 200):
        w = WitnessId(name, t, k, pattern)
        try:
            _REGISTRY[name][0](w)
        except WitnessParamError:
            continue
        return w
    raise WitnessParamError(f"no admissible t for {name}")


def build_witness(w: WitnessId) -> EdgeColoring:
    check, builder, _, _ = _entry(w)
    check(w)
    return builder(w)


def contract_of(w: WitnessId) -> WitnessContract:
    check, _, contract, _ = _entry(w)
    check(w)
    free, contains = contract(w)
    return WitnessContract(tuple(free), tuple(contains), w.t)


def planted_embedding(w: WitnessId) -> dict[int, int]:
    """The rainbow copy of the pattern argument the construction plants by design.

    Only defined for ``thm3-planted`` (identity onto the ``x`` block) and
    ``thm4-bfsmax`` (BFS position ``i`` goes to ``x_i``, host label ``i+1``).
    """
    build_witness(w)
    g = w.pattern_graph()
    if w.name == "thm3-planted":
        return {v: i for i, v in enumerate(g.vertices, start=1)}
    if w.name == "thm4-bfsmax":
        return {v: i + 1 for i, v in enumerate(bfs_labelling(g), start=1)}
    raise WitnessParamError(f"{w.name} has no planted pattern argument")


def validate_witness(w: WitnessId, kc: Optional[EdgeColoring] = None) -> WitnessReport:
    """Run every contract clause of ``w`` through the rainbow search.

    The coloring is built from ``w`` unless one is supplied, e.g. read back
    from a file that may have been edited.
    """
    report = WitnessReport(w)
    try:
        if kc is None:
            kc = build_witness(w)
        contract = contract_of(w)
    except WitnessParamError as exc:
        report.error = str(exc)
        return report
    report.expected_colors = contract.color_count
    report.actual_colors = num_colors(kc)
    for spec in contract.must_be_free_of:
        report.clauses.append(ClauseResult("free", spec, is_rainbow_free(kc, make_pattern(spec))))
    for spec in contract.must_contain_rainbow:
        h = w.pattern_graph() if w.pattern is not None and spec == _spec(w) else make_pattern(spec)
        emb = None if h.order > kc.n else find_rainbow_embedding(kc, h)
        ok = emb is not None and validate_embedding(kc, h, emb)
        report.clauses.append(ClauseResult("contains", spec, ok, emb))
    return report
