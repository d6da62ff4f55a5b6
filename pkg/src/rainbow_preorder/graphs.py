"""Uncolored simple graphs, the named pattern catalog and basic invariants.

Vertices are positive integers.  Patterns built by :func:`make_pattern` are
labelled ``1..n`` with a fixed per-family layout:

* ``Pk``      -- path ``1-2-...-k``
* ``Ck``      -- cycle ``1-2-...-k-1``
* ``K1,k``    -- center ``1``, leaves ``2..k+1``
* ``K1,k+``   -- ``K1,k`` with edge ``1-2`` subdivided: extra vertex ``k+2`` hangs off ``2``
* ``K1,k+e``  -- ``K1,k`` plus the leaf edge ``2-3``
* ``Sa,b,c``  -- center ``1``, then the legs longest first, each listed outward
* ``B``       -- ``K1,3+`` plus a pendant ``6`` on the degree-2 vertex ``2``
* ``Z1``      -- triangle ``1-2-3`` plus pendant ``4`` on ``1``
* ``Kn``      -- complete graph on ``1..n``
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Iterable

__all__ = [
    "Graph",
    "GraphInvariants",
    "PatternError",
    "make_pattern",
    "invariants",
    "is_subgraph",
    "in_domain_H",
    "are_isomorphic",
    "canonical_form",
    "canonical_key",
    "pattern_name",
    "ISO_VERTEX_LIMIT",
]

# Canonical labelling below is exact but exponential on highly symmetric inputs.
ISO_VERTEX_LIMIT = 12


class PatternError(ValueError):
    """Malformed pattern spec or parameter out of range."""


@dataclass(frozen=True)
class Graph:
    vertices: tuple[int, ...]
    edges: frozenset[tuple[int, int]]
    _adj: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        verts = tuple(self.vertices)
        if len(set(verts)) != len(verts):
            raise ValueError("duplicate vertex labels")
        if any(not isinstance(v, int) or isinstance(v, bool) or v < 0 for v in verts):
            raise ValueError("vertex labels must be natural numbers")
        vset = set(verts)
        norm = set()
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if u not in vset or v not in vset:
                raise ValueError(f"edge ({u}, {v}) has an endpoint outside the vertex set")
            norm.add((u, v) if u < v else (v, u))
        adj = {v: set() for v in verts}
        for u, v in norm:
            adj[u].add(v)
            adj[v].add(u)
        object.__setattr__(self, "vertices", tuple(sorted(verts)))
        object.__setattr__(self, "edges", frozenset(norm))
        object.__setattr__(self, "_adj", {v: frozenset(s) for v, s in adj.items()})

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[int, int]], vertices: Iterable[int] = ()) -> "Graph":
        edges = [tuple(e) for e in edges]
        verts = set(vertices)
        for u, v in edges:
            verts.update((u, v))
        if len(set(frozenset(e) for e in edges)) != len(edges):
            raise ValueError("repeated edge")
        return cls(tuple(verts), frozenset(edges))

    @property
    def order(self) -> int:
        return len(self.vertices)

    @property
    def size(self) -> int:
        return len(self.edges)

    def neighbors(self, v: int) -> frozenset[int]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def components(self) -> list[tuple[int, ...]]:
        seen: set[int] = set()
        comps = []
        for s in self.vertices:
            if s in seen:
                continue
            stack, comp = [s], []
            seen.add(s)
            while stack:
                x = stack.pop()
                comp.append(x)
                for y in self._adj[x]:
                    if y not in seen:
                        seen.add(y)
                        stack.append(y)
            comps.append(tuple(sorted(comp)))
        return comps

    def is_connected(self) -> bool:
        return self.order > 0 and len(self.components()) == 1

    def subgraph(self, keep: Iterable[int]) -> "Graph":
        keep = set(keep)
        return Graph(tuple(keep), frozenset(e for e in self.edges if e[0] in keep and e[1] in keep))

    def relabel(self, mapping: dict[int, int]) -> "Graph":
        return Graph(
            tuple(mapping[v] for v in self.vertices),
            frozenset((mapping[u], mapping[v]) for u, v in self.edges),
        )

    def to_json(self) -> dict:
        return {"vertices": list(self.vertices), "edges": [list(e) for e in self.sorted_edges()]}

    @classmethod
    def from_json(cls, data: dict) -> "Graph":
        return cls.from_edges([tuple(e) for e in data["edges"]], data.get("vertices", ()))


# ---------------------------------------------------------------------------
# pattern specs

_SPEC_PATTERNS = [
    ("P", re.compile(r"P(\d+)")),
    ("C", re.compile(r"C(\d+)")),
    ("K1,k+e", re.compile(r"K1,(\d+)\+e")),
    ("K1,k+", re.compile(r"K1,(\d+)\+")),
    ("K1,k", re.compile(r"K1,(\d+)")),
    ("S", re.compile(r"S(\d+),(\d+),(\d+)")),
    ("B", re.compile(r"B")),
    ("Z1", re.compile(r"Z1")),
    ("K", re.compile(r"K(\d+)")),
]
_EDGE_SPEC = re.compile(r"edges:\s*\[(.*)\]", re.S)
_PAIR = re.compile(r"[\(\[]\s*(\d+)\s*,\s*(\d+)\s*[\)\]]")


def _path(k: int) -> Graph:
    return Graph(tuple(range(1, k + 1)), frozenset((i, i + 1) for i in range(1, k)))


def _star(k: int) -> list[tuple[int, int]]:
    return [(1, i) for i in range(2, k + 2)]


def _spider(legs: list[int]) -> Graph:
    edges, nxt = [], 2
    for length in legs:
        prev = 1
        for _ in range(length):
            edges.append((prev, nxt))
            prev, nxt = nxt, nxt + 1
    return Graph.from_edges(edges, [1])


def _parse_edges(text: str) -> Graph:
    body = _EDGE_SPEC.fullmatch(text.strip())
    if body is None:
        raise PatternError(f"malformed edge-list spec: {text!r}")
    inner = body.group(1).strip()
    pairs = [(int(a), int(b)) for a, b in _PAIR.findall(inner)]
    leftover = _PAIR.sub("", inner).replace(",", "").strip()
    if leftover:
        raise PatternError(f"malformed edge-list spec: {text!r}")
    if not pairs:
        raise PatternError("edge-list spec needs at least one edge")
    try:
        return Graph.from_edges(pairs)
    except ValueError as exc:
        raise PatternError(str(exc)) from None


@lru_cache(maxsize=None)
def make_pattern(spec: str) -> Graph:
    """Build the graph named by ``spec`` (see module docstring for labels)."""
    text = spec.strip()
    if text.startswith("edges"):
        return _parse_edges(text)
    compact = text.replace(" ", "")
    for family, rx in _SPEC_PATTERNS:
        m = rx.fullmatch(compact)
        if m is None:
            continue
        args = [int(x) for x in m.groups()]
        if family == "P":
            if args[0] < 1:
                raise PatternError("P<k> needs k >= 1")
            return _path(args[0])
        if family == "C":
            k = args[0]
            if k < 3:
                raise PatternError("C<k> needs k >= 3")
            return Graph.from_edges([(i, i + 1) for i in range(1, k)] + [(k, 1)])
        if family == "K1,k":
            if args[0] < 1:
                raise PatternError("K1,<k> needs k >= 1")
            return Graph.from_edges(_star(args[0]))
        if family == "K1,k+":
            k = args[0]
            if k < 1:
                raise PatternError("K1,<k>+ needs k >= 1")
            return Graph.from_edges(_star(k) + [(2, k + 2)])
        if family == "K1,k+e":
            k = args[0]
            if k < 2:
                raise PatternError("K1,<k>+e needs k >= 2")
            return Graph.from_edges(_star(k) + [(2, 3)])
        if family == "S":
            if min(args) < 1:
                raise PatternError("S<a>,<b>,<c> needs legs >= 1")
            return _spider(sorted(args, reverse=True))
        if family == "B":
            return Graph.from_edges([(1, 2), (1, 3), (1, 4), (2, 5), (2, 6)])
        if family == "Z1":
            return Graph.from_edges([(1, 2), (2, 3), (1, 3), (1, 4)])
        if family == "K":
            if args[0] < 1:
                raise PatternError("K<n> needs n >= 1")
            return Graph.from_edges(combinations(range(1, args[0] + 1), 2), range(1, args[0] + 1))
    raise PatternError(f"unrecognised pattern spec: {spec!r}")


# ---------------------------------------------------------------------------
# invariants


@dataclass(frozen=True)
class GraphInvariants:
    order: int
    size: int
    max_degree: int
    dimension: int
    is_tree: bool
    branch_vertices: tuple[int, ...]
    connected: bool = True
    components: tuple["GraphInvariants", ...] = ()


def invariants(g: Graph) -> GraphInvariants:
    """Order, size, maximum degree, dimension ``|E|-|V|+1`` and branch vertices.

    For a disconnected graph the top-level numbers are still the raw formula
    values; ``connected`` is False and ``components`` holds one record per
    component.
    """
    degs = {v: g.degree(v) for v in g.vertices}
    dim = g.size - g.order + 1
    comps = g.components()
    connected = len(comps) == 1
    per = ()
    if not connected:
        per = tuple(invariants(g.subgraph(c)) for c in comps)
    return GraphInvariants(
        order=g.order,
        size=g.size,
        max_degree=max(degs.values(), default=0),
        dimension=dim,
        is_tree=connected and dim == 0,
        branch_vertices=tuple(v for v in g.vertices if degs[v] >= 3),
        connected=connected,
        components=per,
    )


# ---------------------------------------------------------------------------
# subgraph containment


def search_order(g: Graph) -> list[int]:
    """Max-degree vertex first, then BFS; neighbours by descending degree."""
    order: list[int] = []
    placed: set[int] = set()
    key = lambda v: (-g.degree(v), v)  # noqa: E731
    for root in sorted(g.vertices, key=key):
        if root in placed:
            continue
        placed.add(root)
        queue = [root]
        while queue:
            x = queue.pop(0)
            order.append(x)
            for y in sorted(g.neighbors(x), key=key):
                if y not in placed:
                    placed.add(y)
                    queue.append(y)
    return order


def is_subgraph(h: Graph, g: Graph) -> bool:
    """True iff some injective vertex map sends every edge of ``h`` onto an edge of ``g``."""
    if h.order > g.order or h.size > g.size:
        return False
    hd = sorted((h.degree(v) for v in h.vertices), reverse=True)
    gd = sorted((g.degree(v) for v in g.vertices), reverse=True)
    if any(a > b for a, b in zip(hd, gd)):
        return False
    order = search_order(h)
    pos = {v: i for i, v in enumerate(order)}
    back = [[pos[u] for u in h.neighbors(v) if pos[u] < i] for i, v in enumerate(order)]
    need = [h.degree(v) for v in order]
    gverts = g.vertices
    image: list[int] = [0] * len(order)
    used: set[int] = set()

    def extend(i: int) -> bool:
        if i == len(order):
            return True
        if back[i]:
            cand = set(g.neighbors(image[back[i][0]]))
            for j in back[i][1:]:
                cand &= g.neighbors(image[j])
            cand = sorted(cand)
        else:
            cand = gverts
        for w in cand:
            if w in used or g.degree(w) < need[i]:
                continue
            image[i] = w
            used.add(w)
            if extend(i + 1):
                return True
            used.discard(w)
        return False

    return extend(0)


# ---------------------------------------------------------------------------
# isomorphism via individualisation-refinement


def _refine(adj: list[list[int]], cells: list[list[int]]) -> list[list[int]]:
    while True:
        where = {}
        for ci, cell in enumerate(cells):
            for v in cell:
                where[v] = ci
        out: list[list[int]] = []
        changed = False
        for ci, cell in enumerate(cells):
            if len(cell) == 1:
                out.append(cell)
                continue
            groups: dict[tuple, list[int]] = {}
            for v in cell:
                counts = [0] * len(cells)
                for u in adj[v]:
                    counts[where[u]] += 1
                groups.setdefault(tuple(counts), []).append(v)
            if len(groups) > 1:
                changed = True
            for sig in sorted(groups):
                out.append(groups[sig])
        cells = out
        if not changed:
            return cells


def _canon_search(adj, cells, m_edges):
    cells = _refine(adj, cells)
    for idx, cell in enumerate(cells):
        if len(cell) > 1:
            break
    else:
        pos = {cell[0]: i for i, cell in enumerate(cells)}
        return tuple(sorted((min(pos[u], pos[v]), max(pos[u], pos[v])) for u, v in m_edges))
    best = None
    tried: list[int] = []
    for v in cell:
        # swapping twins is an automorphism fixing the partition: same subtree
        nv = set(adj[v])
        if any(nv - {w} == set(adj[w]) - {v} for w in tried):
            continue
        tried.append(v)
        rest = [u for u in cell if u != v]
        trial = cells[:idx] + [[v], rest] + cells[idx + 1:]
        code = _canon_search(adj, trial, m_edges)
        if best is None or code < best:
            best = code
    return best


def canonical_form(g: Graph) -> tuple[int, tuple[tuple[int, int], ...]]:
    """Label-independent encoding: (order, sorted edge list under the canonical relabelling)."""
    if g.order > ISO_VERTEX_LIMIT:
        raise ValueError(f"canonical labelling supports at most {ISO_VERTEX_LIMIT} vertices")
    # cached on the frozen instance; Graph equality is label-based
    cached = g.__dict__.get("_canon")
    if cached is not None:
        return cached
    index = {v: i for i, v in enumerate(g.vertices)}
    adj = [[] for _ in g.vertices]
    m_edges = []
    for u, v in g.edges:
        a, b = index[u], index[v]
        adj[a].append(b)
        adj[b].append(a)
        m_edges.append((a, b))
    by_deg: dict[int, list[int]] = {}
    for i in range(g.order):
        by_deg.setdefault(len(adj[i]), []).append(i)
    cells = [by_deg[d] for d in sorted(by_deg)]
    code = (g.order, _canon_search(adj, cells, m_edges) if g.order else ())
    object.__setattr__(g, "_canon", code)
    return code


def canonical_key(g: Graph) -> str:
    """Compact string form of :func:`canonical_form`, used as a cache key."""
    n, edges = canonical_form(g)
    return f"{n}:" + ",".join(f"{u}-{v}" for u, v in edges)


def are_isomorphic(g1: Graph, g2: Graph) -> bool:
    if g1.order != g2.order or g1.size != g2.size:
        return False
    if sorted(map(g1.degree, g1.vertices)) != sorted(map(g2.degree, g2.vertices)):
        return False
    return canonical_form(g1) == canonical_form(g2)


def in_domain_H(g: Graph) -> bool:
    """Connected and not one of the paths ``P1..P4``."""
    if not g.is_connected():
        return False
    return not any(are_isomorphic(g, make_pattern(f"P{k}")) for k in range(1, 5))


# ---------------------------------------------------------------------------
# naming


def _named_candidates(n: int, m: int) -> list[str]:
    names = [f"P{n}"]
    if n >= 3:
        names.append(f"C{n}")
    if n >= 2:
        names.append(f"K1,{n - 1}")
    if n >= 3:
        names.append(f"K1,{n - 2}+")
    for a in range(1, n):
        for b in range(1, a + 1):
            c = n - 1 - a - b
            if 1 <= c <= b:
                names.append(f"S{a},{b},{c}")
    if n == 6:
        names.append("B")
    if n == 4:
        names.append("Z1")
    if n >= 3:
        names.append(f"K1,{n - 1}+e")
    if n >= 4 and m == n * (n - 1) // 2:
        names.append(f"K{n}")
    return names


def pattern_name(g: Graph) -> str:
    """Shortest catalog spec naming ``g`` up to isomorphism, else an edge-list spec."""
    if g.order <= ISO_VERTEX_LIMIT:
        for name in _named_candidates(g.order, g.size):
            cand = make_pattern(name)
            if cand.size == g.size and are_isomorphic(cand, g):
                return name
    mapping = {v: i + 1 for i, v in enumerate(g.vertices)}
    h = g.relabel(mapping)
    if h.size == 0:
        return f"P{g.order}" if g.order == 1 else "edges:[]"
    return "edges:[" + ",".join(f"({u},{v})" for u, v in h.sorted_edges()) + "]"


def all_graph_edges(n: int) -> list[tuple[int, int]]:
    return list(combinations(range(1, n + 1), 2))
