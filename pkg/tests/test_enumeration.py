import json
import random
from collections import Counter
from math import comb, factorial

import pytest

from rainbow_preorder.coloring import EdgeColoring, num_colors
from rainbow_preorder.enumeration import (
    COUNTEREXAMPLE,
    IMPLIED_BY_SUBGRAPH,
    KNOWN_FACT,
    NO_COUNTEREXAMPLE_UP_TO,
    Budget,
    BudgetError,
    Verdict,
    check_relation,
    iterate_colorings,
    iterate_rgs,
    necessary_conditions,
    partition_count,
    refute_via_witness_family,
    revalidate_counterexample,
    sample_rgs,
)
from rainbow_preorder.facts import load_ledger
from rainbow_preorder.graphs import make_pattern
from rainbow_preorder.search import brute_force_find


def stirling2(n: int, k: int) -> int:
    """Explicit inclusion-exclusion formula, independent of the code under test."""
    return sum((-1) ** j * comb(k, j) * (k - j) ** n for j in range(k + 1)) // factorial(k)


def stirling_tail(n: int, b: int) -> int:
    return sum(stirling2(n, k) for k in range(b, n + 1))


BELL = [1, 1, 2, 5, 15, 52, 203, 877, 4140, 21147, 115975]


def test_bell_numbers():
    for m, bell in enumerate(BELL[1:], 1):
        assert partition_count(m) == bell == stirling_tail(m, 1)
    assert partition_count(0, 0) == 1
    assert partition_count(0) == 0


@pytest.mark.parametrize("m", range(1, 16))
def test_partition_count_matches_stirling_sums(m):
    for b in range(1, m + 1):
        assert partition_count(m, b) == stirling_tail(m, b)


def test_known_counts_for_small_hosts():
    assert partition_count(6, 4) == 81
    assert partition_count(10, 4) == 106133


@pytest.mark.parametrize("length, b", [(0, 1), (1, 1), (4, 1), (6, 3), (7, 7)])
def test_rgs_enumeration_is_complete_and_valid(length, b):
    seen = set()
    for s in iterate_rgs(length, b):
        assert s not in seen
        seen.add(s)
        top = 0
        for c in s:
            assert 1 <= c <= top + 1
            top = max(top, c)
        assert top >= b or length == 0
    assert len(seen) == partition_count(length, b)


def test_rgs_prefix_restricts():
    full = list(iterate_rgs(5, 1))
    sub = list(iterate_rgs(5, 1, prefix=(1, 2)))
    assert sub == [s for s in full if s[:2] == (1, 2)]


def test_iterate_colorings_counts_and_early_stop():
    assert iterate_colorings(4) == 203
    assert iterate_colorings(4, min_colors=4) == 81
    seen = []

    def visitor(kc):
        seen.append(kc)
        return len(seen) == 10

    iterate_colorings(4, visitor=visitor)
    assert len(seen) == 10
    assert all(isinstance(kc, EdgeColoring) and kc.n == 4 for kc in seen)


def test_enumeration_represents_every_partition():
    # every coloring of K3 over 3 colors normalises to one enumerated string
    enumerated = set(iterate_rgs(3, 1))
    from itertools import product

    from rainbow_preorder.coloring import normalize_colors

    for colors in product(range(1, 4), repeat=3):
        assert normalize_colors(EdgeColoring(3, colors)).colors in enumerated


def test_sample_rgs_is_uniform():
    # 15 set partitions of a 4-set; chi-square with 14 dof, 0.999 quantile 36.12
    rng = random.Random(12345)
    draws = 30000
    counts = Counter(sample_rgs(4, 1, rng) for _ in range(draws))
    assert set(counts) == set(iterate_rgs(4, 1))
    expected = draws / 15
    chi2 = sum((c - expected) ** 2 / expected for c in counts.values())
    assert chi2 < 36.12


def test_sample_rgs_respects_min_blocks():
    rng = random.Random(3)
    for _ in range(500):
        s = sample_rgs(6, 4, rng)
        assert max(s) >= 4


def test_subgraph_short_circuit():
    v = check_relation(make_pattern("C3"), make_pattern("Z1"), 5)
    assert v.kind == IMPLIED_BY_SUBGRAPH and v.scanned == 0


def test_known_fact_short_circuit():
    v = check_relation(make_pattern("Z1"), make_pattern("C4"), 5, ledger=load_ledger())
    assert v.kind == KNOWN_FACT and v.fact_ref == "thm6"


def test_counterexample_is_revalidated_by_oracle():
    v = check_relation(make_pattern("C4"), make_pattern("C5"), 5, min_colors=5)
    assert v.kind == COUNTEREXAMPLE
    assert num_colors(v.witness) >= 5
    assert revalidate_counterexample(v, make_pattern("C4"), make_pattern("C5"), oracle=True)
    assert brute_force_find(v.witness, make_pattern("C4")) is None


def test_parallel_scan_is_deterministic():
    h1, h2 = make_pattern("C4"), make_pattern("C5")
    serial = check_relation(h1, h2, 5, min_colors=5)
    par = check_relation(h1, h2, 5, min_colors=5, budget=Budget(jobs=2))
    assert json.dumps(par.to_json()) == json.dumps(serial.to_json())


def test_no_counterexample_is_bounded_not_proof():
    v = check_relation(make_pattern("C3"), make_pattern("C4"), 4)
    assert v.kind == NO_COUNTEREXAMPLE_UP_TO
    assert v.per_order == [{"n": 4, "mode": "exhaustive", "scanned": 203, "space": 203}]


def test_sampling_needed_beyond_ceiling():
    h1, h2 = make_pattern("C3"), make_pattern("C4")
    with pytest.raises(BudgetError):
        check_relation(h1, h2, 6, budget=Budget(ceiling=100))
    v = check_relation(h1, h2, 5, budget=Budget(ceiling=1000, samples=500, seed=9))
    assert v.per_order[0]["mode"] == "exhaustive"
    assert v.per_order[1] == {"n": 5, "mode": "sampled(500)", "scanned": 500, "space": 115975}
    again = check_relation(h1, h2, 5, budget=Budget(ceiling=1000, samples=500, seed=9))
    assert again.to_json() == v.to_json()


def test_bad_arguments():
    with pytest.raises(ValueError):
        check_relation(make_pattern("P4"), make_pattern("C4"), 5)
    with pytest.raises(BudgetError):
        check_relation(make_pattern("C3"), make_pattern("C5"), 4)
    with pytest.raises(BudgetError):
        Budget(exhaustive=True, samples=3)


def test_verdict_json_roundtrip():
    v = check_relation(make_pattern("C4"), make_pattern("C5"), 5, min_colors=5)
    data = json.loads(json.dumps(v.to_json()))
    assert Verdict.from_json(data).to_json() == v.to_json()
    assert set(data["bound"]) == {"max_n", "min_colors", "mode"}


def test_necessary_conditions_examples():
    s221, c4 = make_pattern("S2,2,1"), make_pattern("C4")
    rep = necessary_conditions(s221, c4)
    assert rep.all_ok
    assert rep.edges == (5, 4) and rep.vertices == (6, 4) and rep.max_degree == (3, 2)
    # a cycle is never below a tree
    assert not necessary_conditions(make_pattern("C3"), make_pattern("P5")).dim_ok
    assert not necessary_conditions(make_pattern("P6"), make_pattern("C3")).vertices_ok


def test_refined_degree_condition():
    # K1,3 has one vertex of degree 3 = 2 + 1 above C4; two adjacent ones in B
    assert necessary_conditions(make_pattern("K1,3"), make_pattern("C4"), refined=True).all_ok
    assert necessary_conditions(make_pattern("B"), make_pattern("C5"), refined=True).all_ok
    spread = make_pattern("edges:[(1,2),(1,3),(1,4),(4,5),(5,6),(5,7),(6,8),(6,9)]")
    rep = necessary_conditions(spread, make_pattern("C5"), refined=True)
    assert rep.top_degree_count_ok is False


def test_witness_family_refutation():
    fam = refute_via_witness_family("thm8-parity", range(5, 9), k=5)
    assert fam.passed and fam.free_of == ("C4",) and fam.contains == ("C5",)
    assert [r.witness.t for r in fam.reports] == [5, 6, 7, 8]
