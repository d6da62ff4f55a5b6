import json

import networkx as nx
import pytest

from rainbow_preorder.cache import VerdictCache, cache_key
from rainbow_preorder.enumeration import check_relation
from rainbow_preorder.facts import FactLedger, load_ledger
from rainbow_preorder.graphs import Graph, canonical_key, make_pattern, pattern_name
from rainbow_preorder.poset import (
    EMPIRICAL_UNREFUTED,
    FACT,
    REFUTED,
    SUBGRAPH,
    UNKNOWN,
    PosetConflict,
    assemble,
    build_catalog,
    export_dot,
    poset_catalog,
)

LEDGER = load_ledger()


def atlas_catalog_keys(max_order):
    out = set()
    for g in nx.graph_atlas_g():
        n = g.number_of_nodes()
        if not 1 <= n <= max_order or not nx.is_connected(g):
            continue
        if n <= 4 and nx.is_isomorphic(g, nx.path_graph(n)):
            continue
        mapping = {v: i + 1 for i, v in enumerate(sorted(g.nodes))}
        out.add(canonical_key(Graph.from_edges([(mapping[u], mapping[v]) for u, v in g.edges], mapping.values())))
    return out


@pytest.mark.parametrize("max_order, count", [(3, 1), (4, 6), (5, 27), (6, 139)])
def test_catalog_matches_graph_atlas(max_order, count):
    cat = build_catalog(max_order)
    assert len(cat) == count
    assert {canonical_key(g) for g in cat} == atlas_catalog_keys(max_order)


def test_catalog_order_seven_count():
    # connected graphs on 1..7 vertices: 1+1+2+6+21+112+853, minus P1..P4
    assert len(build_catalog(7)) == 992


def test_catalog_bounds():
    assert build_catalog(0) == []
    with pytest.raises(ValueError):
        build_catalog(8)


def test_order_five_trees():
    trees = {pattern_name(g) for g in build_catalog(5) if g.order == 5 and g.size == 4}
    assert trees == {"P5", "K1,4", "K1,3+"}
    assert "P4" not in {pattern_name(g) for g in build_catalog(5)}


def test_companions():
    names = [pattern_name(g) for g in poset_catalog(5)]
    assert "K1,4+" in names and len(names) == 28


@pytest.fixture(scope="module")
def snap5():
    return assemble(poset_catalog(5), LEDGER)


def test_minimum_and_covers(snap5):
    low = snap5.minimum_class()
    assert snap5.class_names(low) == ["K1,3", "K1,3+"]
    covers = sorted(tuple(snap5.class_names(c)) for c in snap5.covers(low))
    assert covers == [("C3",), ("K1,4", "K1,4+"), ("P5",)]


def test_nontrivial_classes(snap5):
    big = sorted(snap5.class_names(c) for c, m in enumerate(snap5.classes) if len(m) > 1)
    assert big == [["K1,3", "K1,3+"], ["K1,4", "K1,4+"]]


def test_closure_is_reflexive_and_transitive(snap5):
    n = len(snap5.nodes)
    for i in range(n):
        assert snap5.leq(i, i)
        for j in range(n):
            if not snap5.leq(i, j):
                continue
            for k in range(n):
                if snap5.leq(j, k):
                    assert snap5.leq(i, k)


def test_no_pair_both_proven_and_refuted(snap5):
    for (i, j), st in snap5.le.items():
        if st.provenance == REFUTED:
            assert not snap5.leq(i, j)


def test_classes_are_sccs_and_hasse_is_reduction(snap5):
    for c, members in enumerate(snap5.classes):
        for a in members:
            for b in members:
                assert snap5.leq(a, b)
    dg = nx.DiGraph()
    dg.add_nodes_from(range(len(snap5.classes)))
    for a in range(len(snap5.classes)):
        for b in range(len(snap5.classes)):
            if a != b and snap5.leq(snap5.classes[a][0], snap5.classes[b][0]):
                dg.add_edge(a, b)
    assert nx.is_directed_acyclic_graph(dg)
    assert sorted(nx.transitive_reduction(dg).edges) == sorted((a, b) for a, b, _, _ in snap5.hasse)


def test_provenance_tags(snap5):
    i, j = snap5.index("C3"), snap5.index("Z1")
    assert snap5.status(i, j).provenance == SUBGRAPH
    i, j = snap5.index("Z1"), snap5.index("C4")
    assert snap5.status(i, j).provenance == FACT
    i, j = snap5.index("C4"), snap5.index("C5")
    assert snap5.status(i, j).provenance == REFUTED
    i, j = snap5.index("K1,4"), snap5.index("Z1")
    assert snap5.status(i, j).provenance == UNKNOWN


def test_dot_labels_and_determinism(snap5):
    dot = export_dot(snap5)
    assert 'label="K1,3 | K1,3+"' in dot
    assert 'provenance="SUBGRAPH"' in dot
    assert export_dot(assemble(poset_catalog(5), LEDGER)) == dot


def test_dot_trivial_cases():
    empty = assemble([], LEDGER)
    assert export_dot(empty) == "digraph poset {\n}\n"
    # three pairwise incomparable patterns by the ledger: C4, K1,4, P5 carry no proven relation
    trio = assemble([make_pattern(s) for s in ["C4", "K1,4", "C5"]], FactLedger([]))
    dot = export_dot(trio)
    assert dot.count("[label=") == 3 and "->" not in dot


def test_json_export(snap5):
    data = json.loads(snap5.dumps())
    assert {"nodes", "classes", "hasse", "le", "frontier", "problem1_candidates"} <= set(data)
    assert data["frontier"] and all("open" in f for f in data["frontier"])


def test_empirical_overlay(tmp_path):
    cache = VerdictCache(tmp_path / "c.json")
    k14, z1, c4 = make_pattern("K1,4"), make_pattern("Z1"), make_pattern("C4")
    for a, b in [(z1, c4), (k14, z1)]:
        cache.put(cache_key(a, b, 4, 1, "auto", None), a, b, check_relation(a, b, 4))
    snap = assemble([k14, z1, c4, make_pattern("K1,3")], FactLedger([]), cache)
    # K4 has no K1,4 at all, yet can hold a rainbow Z1
    assert snap.status(snap.index("K1,4"), snap.index("Z1")).provenance == REFUTED
    assert snap.status(snap.index("Z1"), snap.index("C4")).provenance == EMPIRICAL_UNREFUTED
    # bounded evidence never enters the order
    assert not snap.leq(snap.index("Z1"), snap.index("C4"))


def test_counterexample_against_subgraph_pair_aborts(tmp_path):
    cache = VerdictCache(tmp_path / "c.json")
    c3, z1 = make_pattern("C3"), make_pattern("Z1")
    # forge a verdict claiming a counterexample to C3 <= Z1
    v = check_relation(make_pattern("C4"), make_pattern("C5"), 5, min_colors=5)
    cache.put("forged", c3, z1, v)
    with pytest.raises(PosetConflict):
        assemble([c3, z1], LEDGER, cache)


def test_ledger_contradiction_aborts():
    data = LEDGER.to_json()
    data["entries"].append({"key": "bogus", "h1": "C3", "h2": "Z1", "relation": "NLE", "source_quote": "x"})
    with pytest.raises(PosetConflict):
        assemble(build_catalog(4), FactLedger.from_json(data))


def test_rejects_out_of_domain():
    with pytest.raises(ValueError):
        assemble([make_pattern("P4")], LEDGER)


def test_dot_marks_frontier(snap5):
    dot = export_dot(snap5)
    star4 = next(c for c in range(len(snap5.classes)) if snap5.class_names(c) == ["K1,4", "K1,4+"])
    open_count = next(len(e["open"]) for e in snap5.frontier if e["class"] == ["K1,4", "K1,4+"])
    assert open_count > 0
    assert f'c{star4} -> f{star4} [provenance="UNKNOWN", style=dashed, open={open_count}];' in dot
    # placeholders appear only for covers that still have open successors
    assert dot.count("style=dashed") == sum(1 for e in snap5.frontier if e["open"])
