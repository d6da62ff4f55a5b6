"""The preorder on a finite catalog of patterns, its classes and Hasse diagram.

Only SUBGRAPH and FACT pairs are treated as proven.  Bounded search results are
overlaid afterwards: a counterexample marks a pair REFUTED, a clean bounded
scan marks it EMPIRICAL-UNREFUTED, and neither ever feeds the closure.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Optional

import networkx as nx

from .enumeration import COUNTEREXAMPLE, NO_COUNTEREXAMPLE_UP_TO
from .facts import LE, FactLedger, LedgerError
from .graphs import Graph, canonical_key, in_domain_H, is_subgraph, make_pattern, pattern_name

__all__ = [
    "SUBGRAPH",
    "FACT",
    "EMPIRICAL_UNREFUTED",
    "UNKNOWN",
    "REFUTED",
    "MAX_CATALOG_ORDER",
    "PairStatus",
    "PosetSnapshot",
    "PosetConflict",
    "build_catalog",
    "poset_catalog",
    "assemble",
    "export_dot",
]

SUBGRAPH = "SUBGRAPH"
FACT = "FACT"
EMPIRICAL_UNREFUTED = "EMPIRICAL-UNREFUTED"
UNKNOWN = "UNKNOWN"
REFUTED = "REFUTED"
PROVEN = (SUBGRAPH, FACT)

MAX_CATALOG_ORDER = 7


class PosetConflict(LedgerError):
    """A pair is both proven ``<=`` and refuted."""


# ---------------------------------------------------------------------------
# catalog


def _sort_key(g: Graph):
    return (g.order, g.size, canonical_key(g))


def _connected_graphs(max_order: int) -> list[list[Graph]]:
    """Connected graphs by order, one per isomorphism class.

    Every connected graph on ``n`` vertices has a vertex whose removal leaves
    it connected, so adding a vertex with a nonempty neighbourhood to every
    connected graph on ``n - 1`` vertices reaches all of them.
    """
    levels: list[list[Graph]] = [[], [Graph.from_edges([], [1])]]
    for n in range(2, max_order + 1):
        seen: dict[str, Graph] = {}
        for base in levels[n - 1]:
            old = list(base.vertices)
            edges = sorted(base.edges)
            for mask in range(1, 1 << len(old)):
                nbrs = [old[i] for i in range(len(old)) if mask >> i & 1]
                g = Graph.from_edges(edges + [(u, n) for u in nbrs], range(1, n + 1))
                seen.setdefault(canonical_key(g), g)
        levels.append(sorted(seen.values(), key=_sort_key))
    return levels


def build_catalog(max_order: int) -> list[Graph]:
    """All connected graphs of order ``<= max_order`` except ``P1..P4``."""
    if max_order > MAX_CATALOG_ORDER:
        raise ValueError(f"max_order is limited to {MAX_CATALOG_ORDER}")
    if max_order < 1:
        return []
    out = []
    for level in _connected_graphs(max_order)[1:]:
        out.extend(g for g in level if in_domain_H(g))
    return sorted(out, key=_sort_key)


def poset_catalog(max_order: int) -> list[Graph]:
    """``build_catalog`` plus ``K1,k+`` for every star ``K1,k`` it contains.

    Without the companion, the top star's class would be truncated to a
    singleton by the order cut-off.
    """
    cat = build_catalog(max_order)
    keys = {canonical_key(g) for g in cat}
    extra = []
    for k in range(3, max_order):
        if canonical_key(make_pattern(f"K1,{k}")) in keys:
            comp = make_pattern(f"K1,{k}+")
            if canonical_key(comp) not in keys:
                extra.append(comp)
    return sorted(cat + extra, key=_sort_key)


# ---------------------------------------------------------------------------
# snapshot


@dataclass(frozen=True)
class PairStatus:
    provenance: str
    source: str = ""
    threshold: Optional[int] = None

    def to_json(self) -> dict:
        out = {"provenance": self.provenance, "source": self.source}
        if self.threshold is not None:
            out["threshold"] = self.threshold
        return out


@dataclass
class PosetSnapshot:
    nodes: list[Graph]
    names: list[str]
    le: dict[tuple[int, int], PairStatus]
    classes: list[tuple[int, ...]]
    hasse: list[tuple[int, int, str, str]]
    frontier: list[dict] = field(default_factory=list)
    problem1_candidates: list[tuple[int, int]] = field(default_factory=list)

    def status(self, i: int, j: int) -> PairStatus:
        if i == j:
            return PairStatus(SUBGRAPH, "reflexive", 1)
        return self.le.get((i, j), PairStatus(UNKNOWN))

    def leq(self, i: int, j: int) -> bool:
        return self.status(i, j).provenance in PROVEN

    def index(self, spec: str | Graph) -> int:
        g = make_pattern(spec) if isinstance(spec, str) else spec
        key = canonical_key(g)
        for i, h in enumerate(self.nodes):
            if canonical_key(h) == key:
                return i
        raise KeyError(f"{spec} is not in the catalog")

    def class_of(self, i: int) -> int:
        for c, members in enumerate(self.classes):
            if i in members:
                return c
        raise KeyError(i)

    def class_names(self, c: int) -> list[str]:
        return [self.names[i] for i in self.classes[c]]

    def minimal_classes(self) -> list[int]:
        heads = {b for _, b, _, _ in self.hasse}
        return [c for c in range(len(self.classes)) if c not in heads]

    def minimum_class(self) -> Optional[int]:
        """The class below every other class, if there is one."""
        rep = [members[0] for members in self.classes]
        for c, r in enumerate(rep):
            if all(self.leq(r, s) for s in rep):
                return c
        return None

    def covers(self, c: int) -> list[int]:
        return sorted(b for a, b, _, _ in self.hasse if a == c)

    def to_json(self) -> dict:
        n = len(self.nodes)
        return {
            "nodes": [
                {"id": i, "name": self.names[i], "canonical": canonical_key(g), "order": g.order, "size": g.size}
                for i, g in enumerate(self.nodes)
            ],
            "classes": [
                {"id": c, "members": [self.names[i] for i in members]} for c, members in enumerate(self.classes)
            ],
            "hasse": [
                {"from": a, "to": b, "provenance": p, "source": s} for a, b, p, s in self.hasse
            ],
            "le": [
                {"h1": self.names[i], "h2": self.names[j], **self.status(i, j).to_json()}
                for i in range(n)
                for j in range(n)
                if i != j and self.status(i, j).provenance != UNKNOWN
            ],
            "frontier": self.frontier,
            "problem1_candidates": [
                {"h1": self.names[i], "h2": self.names[j]} for i, j in self.problem1_candidates
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1, sort_keys=True) + "\n"


def _closure(n: int, direct: dict[tuple[int, int], PairStatus]) -> list[int]:
    reach = [1 << i for i in range(n)]
    for (i, j), st in direct.items():
        if st.provenance in PROVEN:
            reach[i] |= 1 << j
    for k in range(n):
        bit = 1 << k
        rk = reach[k]
        for i in range(n):
            if reach[i] & bit:
                reach[i] |= rk
    return reach


def _verdict_status(v) -> Optional[PairStatus]:
    if v.kind == COUNTEREXAMPLE:
        colors = len(set(v.witness.colors)) if v.witness is not None else None
        return PairStatus(REFUTED, f"counterexample on K{v.witness.n if v.witness else '?'} "
                          f"({v.mode}, >= {v.min_colors} colors)", colors)
    if v.kind == NO_COUNTEREXAMPLE_UP_TO:
        return PairStatus(EMPIRICAL_UNREFUTED, f"no counterexample up to n={v.max_n} "
                          f"({v.mode}, >= {v.min_colors} colors)")
    return None


def assemble(catalog: Iterable[Graph], ledger: FactLedger, verdict_cache=None) -> PosetSnapshot:
    """Build the snapshot; raises :class:`PosetConflict` on any proven/refuted clash."""
    uniq: dict[str, Graph] = {}
    for g in catalog:
        if not in_domain_H(g):
            raise ValueError(f"{pattern_name(g)} is outside the domain")
        uniq.setdefault(canonical_key(g), g)
    nodes = sorted(uniq.values(), key=_sort_key)
    keys = [canonical_key(g) for g in nodes]
    where = {k: i for i, k in enumerate(keys)}
    names = [pattern_name(g) for g in nodes]
    n = len(nodes)

    conflicts = ledger.check_consistency(nodes)
    if conflicts:
        a, b = conflicts[0]
        raise PosetConflict(
            f"ledger asserts both {a.describe()} and {b.describe()} for "
            f"({pattern_name(a.h1)}, {pattern_name(a.h2)})"
        )

    direct: dict[tuple[int, int], PairStatus] = {}
    for i in range(n):
        for j in range(n):
            if i != j and is_subgraph(nodes[i], nodes[j]):
                direct[i, j] = PairStatus(SUBGRAPH, "subgraph", 1)
    nle: dict[tuple[int, int], str] = {}
    for inst in ledger.instances(nodes):
        i, j = where[inst.pair[0]], where[inst.pair[1]]
        if i == j:
            continue
        if inst.relation == LE:
            if (i, j) not in direct:
                direct[i, j] = PairStatus(FACT, inst.describe(), inst.threshold)
        else:
            nle.setdefault((i, j), inst.describe())

    reach = _closure(n, direct)
    le: dict[tuple[int, int], PairStatus] = {}
    for i in range(n):
        for j in range(n):
            if i != j and reach[i] >> j & 1:
                le[i, j] = direct.get((i, j), PairStatus(FACT, "transitive closure"))

    for (i, j), src in sorted(nle.items()):
        if (i, j) in le:
            raise PosetConflict(
                f"{names[i]} <= {names[j]} is proven ({le[i, j].source}) but {src} refutes it"
            )
        le[i, j] = PairStatus(REFUTED, src)

    if verdict_cache is not None:
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                for v in verdict_cache.for_pair(keys[i], keys[j]):
                    st = _verdict_status(v)
                    if st is None:
                        continue
                    cur = le.get((i, j))
                    if cur is not None and cur.provenance in PROVEN:
                        if st.provenance == REFUTED and cur.threshold is not None and (
                            st.threshold is None or st.threshold >= cur.threshold
                        ):
                            raise PosetConflict(
                                f"{names[i]} <= {names[j]} is proven ({cur.source}, t={cur.threshold}) "
                                f"but a cached {st.source} uses {st.threshold} colors"
                            )
                        continue
                    if cur is None or (cur.provenance == EMPIRICAL_UNREFUTED and st.provenance == REFUTED):
                        le[i, j] = st

    # classes and class-level reduction
    dg = nx.DiGraph()
    dg.add_nodes_from(range(n))
    dg.add_edges_from(p for p, st in le.items() if st.provenance in PROVEN)
    classes = sorted((tuple(sorted(c)) for c in nx.strongly_connected_components(dg)), key=lambda c: c[0])
    cls_of = {i: c for c, members in enumerate(classes) for i in members}
    cdg = nx.DiGraph()
    cdg.add_nodes_from(range(len(classes)))
    cdg.add_edges_from((cls_of[a], cls_of[b]) for a, b in dg.edges if cls_of[a] != cls_of[b])
    if not nx.is_directed_acyclic_graph(cdg):
        raise AssertionError("class order has a cycle")
    red = nx.transitive_reduction(cdg)
    hasse = []
    for a, b in sorted(red.edges):
        pairs = [(i, j) for i in classes[a] for j in classes[b] if (i, j) in le]
        sub = [p for p in pairs if le[p].provenance == SUBGRAPH]
        best = le[sub[0]] if sub else le[pairs[0]]
        hasse.append((a, b, best.provenance, best.source))

    def class_status(a: int, b: int) -> str:
        seen = {le.get((i, j), PairStatus(UNKNOWN)).provenance for i in classes[a] for j in classes[b]}
        for p in (SUBGRAPH, FACT, REFUTED, EMPIRICAL_UNREFUTED):
            if p in seen:
                return p
        return UNKNOWN

    snap = PosetSnapshot(nodes, names, le, classes, hasse)
    frontier = []
    low = snap.minimum_class()
    if low is not None:
        for c in snap.covers(low):
            open_above = [
                d for d in range(len(classes))
                if d != c and class_status(c, d) in (UNKNOWN, EMPIRICAL_UNREFUTED)
            ]
            frontier.append({
                "class": [names[i] for i in classes[c]],
                "open": [
                    {"class": [names[i] for i in classes[d]], "status": class_status(c, d)} for d in open_above
                ],
            })
    snap.frontier = frontier
    cand = []
    for a in range(len(classes)):
        for b in range(a + 1, len(classes)):
            fwd, back = class_status(a, b), class_status(b, a)
            ok = {EMPIRICAL_UNREFUTED, SUBGRAPH, FACT}
            if fwd in ok and back in ok and EMPIRICAL_UNREFUTED in (fwd, back):
                cand.append((classes[a][0], classes[b][0]))
    snap.problem1_candidates = cand
    return snap


# ---------------------------------------------------------------------------
# export


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(snapshot: PosetSnapshot) -> str:
    """Graphviz source of the class-level Hasse diagram, smallest classes first."""
    lines = ["digraph poset {"]
    if snapshot.classes:
        lines.append("  rankdir=BT;")
        lines.append("  node [shape=box];")
    for c, members in enumerate(snapshot.classes):
        label = " | ".join(snapshot.names[i] for i in members)
        lines.append(f"  c{c} [label={_quote(label)}];")
    for a, b, prov, src in snapshot.hasse:
        lines.append(f"  c{a} -> c{b} [provenance={_quote(prov)}, source={_quote(src)}];")
    # open successors of the minimum's covers: one placeholder per cover
    for entry in snapshot.frontier:
        if not entry["open"]:
            continue
        c = next(c for c in range(len(snapshot.classes)) if snapshot.class_names(c) == entry["class"])
        lines.append(f'  f{c} [label="?", shape=plaintext];')
        lines.append(f'  c{c} -> f{c} [provenance="{UNKNOWN}", style=dashed, open={len(entry["open"])}];')
    lines.append("}")
    return "\n".join(lines) + "\n"
