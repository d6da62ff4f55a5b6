import json

import pytest

from rainbow_preorder.facts import LE, NLE, Fact, FactLedger, LedgerError, evaluate, fill, load_ledger
from rainbow_preorder.graphs import make_pattern
from rainbow_preorder.poset import build_catalog, poset_catalog

LEDGER = load_ledger()


def test_expression_evaluator():
    assert evaluate("m*(k-2)+2", {"m": 3, "k": 5}) == 11
    assert evaluate("k*(k-1)//2+2*k+4", {"k": 4}) == 18
    assert evaluate(7, {}) == 7
    for bad in ["__import__('os')", "k.real", "k if k else 1", "1 +"]:
        with pytest.raises(LedgerError):
            evaluate(bad, {"k": 1})
    with pytest.raises(LedgerError):
        evaluate("j", {"k": 1})
    assert fill("C{m*(k-2)+2}", {"m": 2, "k": 3}) == "C4"


def test_every_entry_has_a_quote_and_valid_relation():
    for fact in LEDGER.facts:
        assert fact.source_quote.strip()
        assert fact.relation in (LE, NLE)


def test_quotes_are_unique_keys():
    keys = [f.key for f in LEDGER.facts]
    assert len(keys) == len(set(keys))


def test_schema_roundtrip():
    again = FactLedger.from_json(json.loads(json.dumps(LEDGER.to_json())))
    assert again.to_json() == LEDGER.to_json()


def test_rejects_malformed_entries():
    base = {"key": "x", "h1": "C{k}", "h2": "C5", "relation": "LE", "source_quote": "q"}
    with pytest.raises(LedgerError):
        Fact.from_json(base)  # k has no range
    with pytest.raises(LedgerError):
        Fact.from_json({**base, "h1": "C3", "source_quote": " "})
    with pytest.raises(LedgerError):
        Fact.from_json({**base, "h1": "C3", "relation": "MAYBE"})
    with pytest.raises(LedgerError):
        FactLedger([Fact.from_json({**base, "h1": "C3"})] * 2)


def test_lookup_concrete_and_family_entries():
    look = lambda a, b: LEDGER.lookup(make_pattern(a), make_pattern(b))
    assert look("Z1", "C4").key == "thm6"
    assert look("Z1", "C3").relation == NLE
    assert look("P6", "C5").threshold == 14
    assert look("C4", "C7").key == "thm8"
    s = look("S2,2,1", "C5")
    assert s.key == "thm-s221-cycles" and s.threshold == 10 + 10 + 4
    assert look("B", "C7").threshold == 7 * 8 // 2 + 4
    assert look("C5", "C8").key == "thm-cycles"  # 8 = 2*(5-2)+2
    assert look("K1,5+", "K1,5").key == "thm1-le"


def test_lookup_any_entries():
    look = lambda a, b: LEDGER.lookup(make_pattern(a), make_pattern(b))
    assert look("K1,3", "K4").key == "thm15-1"
    assert look("C4", "K1,3").relation == NLE
    assert look("K1,3+", "K1,3").relation == LE
    # plain subgraph pairs are not ledger entries
    assert look("K1,4", "K1,5") is None
    assert look("C3", "K1,5").relation == NLE


def test_star_chain_exceptions():
    nle = [i for i in LEDGER.lookup_all(make_pattern("K1,3+"), make_pattern("K1,5")) if i.relation == NLE]
    assert not nle
    nle = [i for i in LEDGER.lookup_all(make_pattern("K1,5+e"), make_pattern("K1,5")) if i.relation == NLE]
    assert nle


def test_proper_supergraph_rule():
    insts = LEDGER.lookup_all(make_pattern("C5"), make_pattern("P5"))
    assert any(i.key == "thm1-nle" for i in insts)
    # the star pair is the exception
    insts = LEDGER.lookup_all(make_pattern("K1,4+"), make_pattern("K1,4"))
    assert not any(i.key == "thm1-nle" for i in insts)


def test_necessary_condition_rule():
    insts = LEDGER.lookup_all(make_pattern("C3"), make_pattern("P5"))
    assert any(i.key == "thm3-thm5" for i in insts)


@pytest.mark.parametrize("max_order", [5, 6])
def test_ledger_is_consistent_on_catalog(max_order):
    assert LEDGER.check_consistency(poset_catalog(max_order)) == []


def test_detects_contradiction():
    extra = {"key": "bogus", "h1": "Z1", "h2": "C4", "relation": "NLE", "source_quote": "made up"}
    data = LEDGER.to_json()
    data["entries"].append(extra)
    bad = FactLedger.from_json(data)
    conflicts = bad.check_consistency(build_catalog(4))
    assert conflicts and {c.key for c in conflicts[0]} == {"thm6", "bogus"}


def test_about():
    keys = {f.key for f, _ in LEDGER.about(make_pattern("C4"))}
    assert {"thm6", "cor7", "cor11", "thm12-1", "thm8", "thm13-2"} <= keys
    envs = dict((f.key, e) for f, e in LEDGER.about(make_pattern("C7")))
    assert envs["thm8"] == [{"k": 7}]


def test_load_from_path(tmp_path):
    path = tmp_path / "ledger.json"
    path.write_text(json.dumps(LEDGER.to_json()))
    assert len(load_ledger(path)) == len(LEDGER)
