"""Command-line interface.

Machine-readable JSON goes to stdout, one-line human summaries to stderr.
Exit status: 0 success or contract pass, 1 contract failure or counterexample,
2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from .cache import VerdictCache, cache_key
from .coloring import ColoringError, dump_coloring, load_coloring
from .enumeration import (
    COUNTEREXAMPLE,
    Budget,
    BudgetError,
    check_relation,
    necessary_conditions,
    refute_via_witness_family,
)
from .facts import LedgerError, load_ledger
from .graphs import (
    Graph,
    PatternError,
    canonical_key,
    in_domain_H,
    invariants,
    make_pattern,
    pattern_name,
)
from .poset import assemble, build_catalog, export_dot, poset_catalog
from .search import PatternTooLarge, brute_force_find, find_rainbow_embedding, rainbow_embeddings
from .witnesses import (
    WITNESS_NAMES,
    WitnessId,
    WitnessParamError,
    build_witness,
    minimum_params,
    validate_witness,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _note(msg: str) -> None:
    sys.stderr.write(msg + "\n")


def _pattern(spec: str) -> Graph:
    try:
        return make_pattern(spec)
    except PatternError as exc:
        raise UsageError(str(exc)) from None


def _t_range(text: str) -> list[int]:
    try:
        lo, hi = (int(x) for x in text.split(".."))
    except ValueError:
        raise UsageError(f"--t-range expects A..B, got {text!r}") from None
    if lo > hi:
        raise UsageError("--t-range is empty")
    return list(range(lo, hi + 1))


def _describe(g: Graph) -> dict:
    inv = invariants(g)
    return {
        "name": pattern_name(g),
        "canonical": canonical_key(g),
        "vertices": list(g.vertices),
        "edges": [list(e) for e in g.sorted_edges()],
        "order": inv.order,
        "size": inv.size,
        "max_degree": inv.max_degree,
        "dimension": inv.dimension,
        "is_tree": inv.is_tree,
        "in_domain": in_domain_H(g),
    }


# ---------------------------------------------------------------------------
# subcommands


def cmd_patterns(args) -> int:
    if args.action == "list":
        _emit([_describe(g) for g in build_catalog(args.max_order)])
        return EXIT_OK
    if not args.spec:
        raise UsageError("patterns show needs a SPEC")
    _emit(_describe(_pattern(args.spec)))
    return EXIT_OK


def _witness_id(args, t: Optional[int] = None) -> WitnessId:
    try:
        base = minimum_params(args.id, args.k, args.pattern)
    except WitnessParamError as exc:
        raise UsageError(str(exc)) from None
    if t is None:
        t = args.t if args.t is not None else base.t
    return WitnessId(args.id, t, base.k, base.pattern)


def cmd_witness_build(args) -> int:
    w = _witness_id(args)
    try:
        kc = build_witness(w)
    except WitnessParamError as exc:
        raise UsageError(str(exc)) from None
    text = dump_coloring(kc, args.out, extra={"witness": w.name, "params": w.params()})
    if args.out is None:
        sys.stdout.write(text + "\n")
    _note(f"{w.label()}: K{kc.n}, {len(set(kc.colors))} colors")
    return EXIT_OK


def _grid_reports():
    reports = []
    for name in WITNESS_NAMES:
        base = minimum_params(name)
        for t in range(base.t, base.t + 4):
            reports.append(validate_witness(WitnessId(name, t, base.k, base.pattern)))
    return reports


def cmd_witness_verify(args) -> int:
    if args.id == "all":
        reports = _grid_reports()
        for r in reports:
            _note(r.summary())
        _emit([r.to_json() for r in reports])
        return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL
    if args.id not in WITNESS_NAMES:
        raise UsageError(f"unknown witness id {args.id!r}")
    if args.t_range:
        if args.coloring:
            raise UsageError("--coloring and --t-range are exclusive")
        base = _witness_id(args)
        try:
            fam = refute_via_witness_family(args.id, _t_range(args.t_range), base.k, base.pattern)
        except WitnessParamError as exc:
            raise UsageError(str(exc)) from None
        for r in fam.reports:
            _note(r.summary())
        _emit(fam.to_json())
        return EXIT_OK if fam.passed else EXIT_FAIL
    w = _witness_id(args)
    kc = None
    if args.coloring:
        try:
            kc = load_coloring(args.coloring)
        except (OSError, ColoringError, ValueError) as exc:
            raise UsageError(f"cannot read coloring: {exc}") from None
    report = validate_witness(w, kc)
    if report.error is not None and kc is None:
        raise UsageError(report.error)
    _note(report.summary())
    _emit(report.to_json())
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_search(args) -> int:
    try:
        kc = load_coloring(args.coloring)
    except (OSError, ColoringError, ValueError) as exc:
        raise UsageError(f"cannot read coloring: {exc}") from None
    h = _pattern(args.pattern)
    try:
        if args.all:
            embs = rainbow_embeddings(kc, h, args.limit)
            _emit([{str(k): v for k, v in sorted(e.items())} for e in embs])
            _note(f"{len(embs)} rainbow {pattern_name(h)} embedding(s)")
            return EXIT_OK
        emb = brute_force_find(kc, h) if args.oracle else find_rainbow_embedding(kc, h)
    except PatternTooLarge:
        emb = None
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if emb is None:
        sys.stdout.write("FREE\n")
    else:
        _emit({str(k): v for k, v in sorted(emb.items())})
    return EXIT_OK


def _open_cache(args) -> Optional[VerdictCache]:
    if args.no_cache:
        return None
    return VerdictCache(args.cache)


def cmd_relation_check(args) -> int:
    h1, h2 = _pattern(args.h1), _pattern(args.h2)
    for h, spec in ((h1, args.h1), (h2, args.h2)):
        if not in_domain_H(h):
            raise UsageError(f"{spec} is not a connected graph other than P1..P4")
    try:
        budget = Budget(exhaustive=args.exhaustive, samples=args.samples or 0, seed=args.seed, jobs=args.jobs)
    except BudgetError as exc:
        raise UsageError(str(exc)) from None
    mode = "exhaustive" if args.exhaustive else (f"sampled({args.samples})" if args.samples else "auto")
    seed = args.seed if args.samples else None
    facts = "facts" if args.use_facts else "nofacts"
    key = cache_key(h1, h2, args.max_n, args.min_colors, f"{mode}/{facts}", seed)
    cache = _open_cache(args)
    raw = cache.get_raw(key) if cache is not None else None
    if raw is None:
        ledger = load_ledger() if args.use_facts else None
        try:
            verdict = check_relation(h1, h2, args.max_n, args.min_colors, budget, ledger)
        except BudgetError as exc:
            raise UsageError(str(exc)) from None
        raw = verdict.to_json()
        if cache is not None:
            cache.put(key, h1, h2, verdict)
            cache.save()
        origin = "computed"
    else:
        origin = "cache"
    orders = ", ".join(f"K{p['n']}: {p['scanned']}" for p in raw["per_order"])
    _note(f"{raw['kind']} for {raw['h1']} <= {raw['h2']} ({origin}; scanned {orders or 'nothing'})")
    _emit(raw)
    return EXIT_FAIL if raw["kind"] == COUNTEREXAMPLE else EXIT_OK


def cmd_relation_conditions(args) -> int:
    h1, h2 = _pattern(args.h1), _pattern(args.h2)
    rep = necessary_conditions(h1, h2, refined=True)
    _emit(rep.to_json())
    _note(f"necessary conditions for {pattern_name(h1)} <= {pattern_name(h2)}: "
          + ("all hold" if rep.all_ok else "violated"))
    return EXIT_OK if rep.all_ok else EXIT_FAIL


def _ledger(args):
    try:
        return load_ledger(args.ledger)
    except (OSError, LedgerError, KeyError, ValueError) as exc:
        raise UsageError(f"cannot load ledger: {exc}") from None


def cmd_facts_list(args) -> int:
    ledger = _ledger(args)
    if args.about is None:
        _emit(ledger.to_json())
        _note(f"{len(ledger)} ledger entries (version {ledger.version})")
        return EXIT_OK
    g = _pattern(args.about)
    hits = ledger.about(g)
    _emit([{**fact.to_json(), "matches": envs} for fact, envs in hits])
    _note(f"{len(hits)} entries mention {pattern_name(g)}")
    return EXIT_OK


def cmd_poset_build(args) -> int:
    ledger = _ledger(args)
    try:
        catalog = build_catalog(args.max_order) if args.no_companions else poset_catalog(args.max_order)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    cache = None if args.no_cache else VerdictCache(args.cache)
    try:
        snap = assemble(catalog, ledger, cache)
    except LedgerError as exc:
        _note(f"conflict: {exc}")
        return EXIT_FAIL
    dot = export_dot(snap)
    if args.out_dot:
        with open(args.out_dot, "w") as fh:
            fh.write(dot)
    if args.out_json:
        with open(args.out_json, "w") as fh:
            fh.write(snap.dumps())
    if not args.out_dot and not args.out_json:
        sys.stdout.write(dot)
    low = snap.minimum_class()
    msg = f"{len(snap.nodes)} patterns, {len(snap.classes)} classes, {len(snap.hasse)} covers"
    if low is not None:
        msg += f"; minimum {' | '.join(snap.class_names(low))}"
    _note(msg)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def _add_witness_params(p) -> None:
    p.add_argument("--t", type=int, help="number of colors (default: smallest admissible)")
    p.add_argument("--k", type=int, help="family parameter, where the construction has one")
    p.add_argument("--pattern", help="pattern argument for thm3-planted / thm4-bfsmax")


def _add_cache(p) -> None:
    p.add_argument("--cache", help="verdict cache file (default: $RAINBOW_PREORDER_CACHE or ~/.cache)")
    p.add_argument("--no-cache", action="store_true", help="neither read nor write the cache")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rainbow-preorder",
        description="Rainbow forbidden subgraph preorder toolkit.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("patterns", help="list or inspect pattern specs")
    p.add_argument("action", choices=["list", "show"])
    p.add_argument("spec", nargs="?")
    p.add_argument("--max-order", type=int, default=5)
    p.set_defaults(func=cmd_patterns)

    w = sub.add_parser("witness", help="build or verify witness colorings")
    wsub = w.add_subparsers(dest="action", required=True)
    p = wsub.add_parser("build")
    p.add_argument("id", choices=WITNESS_NAMES)
    _add_witness_params(p)
    p.add_argument("--out", help="write the coloring JSON here instead of stdout")
    p.set_defaults(func=cmd_witness_build)
    p = wsub.add_parser("verify")
    p.add_argument("id", help="witness id, or 'all' for the minimum..minimum+3 grid")
    _add_witness_params(p)
    p.add_argument("--t-range", help="verify every t in A..B")
    p.add_argument("--coloring", help="check this coloring file against the contract instead")
    p.set_defaults(func=cmd_witness_verify)

    p = sub.add_parser("search", help="find a rainbow copy of a pattern")
    p.add_argument("--coloring", required=True)
    p.add_argument("--pattern", required=True)
    p.add_argument("--oracle", action="store_true", help="use the brute-force scan")
    p.add_argument("--all", action="store_true", help="list embeddings instead of one")
    p.add_argument("--limit", type=int, default=100)
    p.set_defaults(func=cmd_search)

    r = sub.add_parser("relation", help="bounded relation checks")
    rsub = r.add_subparsers(dest="action", required=True)
    p = rsub.add_parser("check")
    p.add_argument("h1")
    p.add_argument("h2")
    p.add_argument("--max-n", type=int, required=True)
    p.add_argument("--min-colors", type=int, default=1)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exhaustive", action="store_true")
    mode.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument(
        "--deterministic",
        action="store_true",
        help="prefix-ordered result selection (always on; accepted for scripts)",
    )
    p.add_argument("--use-facts", action="store_true", help="answer from the ledger when it proves the pair")
    _add_cache(p)
    p.set_defaults(func=cmd_relation_check)
    p = rsub.add_parser("conditions")
    p.add_argument("h1")
    p.add_argument("h2")
    p.set_defaults(func=cmd_relation_conditions)

    f = sub.add_parser("facts", help="inspect the fact ledger")
    fsub = f.add_subparsers(dest="action", required=True)
    p = fsub.add_parser("list")
    p.add_argument("--about")
    p.add_argument("--ledger", help="alternative ledger JSON file")
    p.set_defaults(func=cmd_facts_list)

    po = sub.add_parser("poset", help="assemble the preorder on a catalog")
    posub = po.add_subparsers(dest="action", required=True)
    p = posub.add_parser("build")
    p.add_argument("--max-order", type=int, default=5)
    p.add_argument("--out-dot")
    p.add_argument("--out-json")
    p.add_argument("--ledger", help="alternative ledger JSON file")
    p.add_argument("--no-companions", action="store_true", help="do not add K1,k+ for the largest star")
    _add_cache(p)
    p.set_defaults(func=cmd_poset_build)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        _note(f"error: {exc}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
