import pytest

from rainbow_preorder.coloring import num_colors
from rainbow_preorder.graphs import is_subgraph, make_pattern
from rainbow_preorder.search import is_rainbow_free, validate_embedding
from rainbow_preorder.witnesses import (
    WITNESS_NAMES,
    WitnessId,
    WitnessParamError,
    bfs_labelling,
    build_witness,
    contract_of,
    minimum_params,
    planted_embedding,
    removable_edge,
    validate_witness,
)

GRID = [(name, dt) for name in WITNESS_NAMES for dt in range(4)]


@pytest.mark.parametrize("name, dt", GRID)
def test_grid_minimum_to_minimum_plus_three(name, dt):
    base = minimum_params(name)
    report = validate_witness(WitnessId(name, base.t + dt, base.k, base.pattern))
    assert report.passed, report.summary()


@pytest.mark.parametrize("name", WITNESS_NAMES)
def test_contract_lists_are_disjoint_and_nonempty(name):
    c = contract_of(minimum_params(name))
    assert not set(c.must_be_free_of) & set(c.must_contain_rainbow)
    assert c.must_be_free_of


@pytest.mark.parametrize("name", WITNESS_NAMES)
def test_below_minimum_is_rejected(name):
    base = minimum_params(name)
    with pytest.raises(WitnessParamError):
        build_witness(WitnessId(name, base.t - 1, base.k, base.pattern))


def test_unknown_id():
    with pytest.raises(WitnessParamError):
        build_witness(WitnessId("thm99", 5))
    report = validate_witness(WitnessId("thm99", 5))
    assert not report.passed and report.error


def test_lemma1_layout():
    # x_i y_i gets color i for i < t, every other edge color t
    t = 5
    kc = build_witness(WitnessId("lemma1-matching", t))
    assert kc.n == 2 * (t - 1)
    assert num_colors(kc) == t
    assert sorted(kc.colors).count(t) == len(kc.colors) - (t - 1)


@pytest.mark.parametrize("k", [5, 7])
def test_thm8_parity_family(k):
    for t in range(k, k + 6):
        assert validate_witness(WitnessId("thm8-parity", t, k)).passed


def test_thm8_requires_odd_k():
    with pytest.raises(WitnessParamError):
        build_witness(WitnessId("thm8-parity", 6, 6))


def test_thm4_uses_max_color_rule():
    w = WitnessId("thm4-bfsmax", 6, pattern="P5")
    kc = build_witness(w)
    assert kc.n == 7
    assert all(c == max(u, v) - 1 for (u, v), c in kc.items())


@pytest.mark.parametrize("spec", ["K1,3", "P5", "B"])
def test_thm4_planted_tree(spec):
    w = minimum_params("thm4-bfsmax", pattern=spec)
    kc = build_witness(w)
    tree = make_pattern(spec)
    assert validate_embedding(kc, tree, planted_embedding(w))


@pytest.mark.parametrize("spec", ["C4", "S2,2,1", "K4"])
def test_thm3_planted_pattern(spec):
    w = minimum_params("thm3-planted", pattern=spec)
    kc = build_witness(w)
    h2 = make_pattern(spec)
    assert validate_embedding(kc, h2, planted_embedding(w))
    assert validate_witness(w).passed


def test_thm3_removable_edge_lies_on_a_cycle():
    g = make_pattern("Z1")
    u, v = removable_edge(g)
    assert (u, v) in {(1, 2), (1, 3), (2, 3)}
    assert removable_edge(make_pattern("P5")) is None


def test_bfs_labelling_starts_at_a_chosen_root():
    order = bfs_labelling(make_pattern("B"), root=1)
    assert order[0] == 1 and sorted(order) == list(range(1, 7))


def test_fresh_color_on_one_edge_breaks_every_contract():
    for name in WITNESS_NAMES:
        base = minimum_params(name)
        w = WitnessId(name, base.t + 2, base.k, base.pattern)
        kc = build_witness(w)
        # an edge whose color is shared, so the color count grows by one
        (u, v), _ = next((e, c) for e, c in kc.items() if kc.colors.count(c) > 1)
        bad = kc.recolor(u, v, max(kc.colors) + 1)
        assert not validate_witness(w, bad).passed, name


def test_count_preserving_fault_is_caught_by_a_clause():
    # recolor one C4 edge of the thm8 host so that a rainbow C4 appears
    w = WitnessId("thm8-parity", 5, 5)
    kc = build_witness(w)
    caught = 0
    for (u, v), c in kc.items():
        for d in set(kc.colors) - {c}:
            bad = kc.recolor(u, v, d)
            if num_colors(bad) == num_colors(kc) and not is_rainbow_free(bad, make_pattern("C4")):
                report = validate_witness(w, bad)
                assert not report.passed
                assert any(not cl.passed and cl.kind == "free" for cl in report.clauses)
                caught += 1
    assert caught > 0


def test_witness_hosts_respect_subgraph_logic():
    # a host free of H is free of every supergraph of H
    for name in WITNESS_NAMES:
        w = minimum_params(name)
        kc = build_witness(w)
        for spec in contract_of(w).must_be_free_of:
            for bigger in ["B", "S2,2,1", "P6", "C5", "K1,4+"]:
                if is_subgraph(make_pattern(spec), make_pattern(bigger)) and make_pattern(bigger).order <= kc.n:
                    assert is_rainbow_free(kc, make_pattern(bigger))
