"""Machine-readable ledger of proven relations and non-relations.

Entries live in ``data/facts.json``.  A pattern template is a pattern spec
with ``{expr}`` holes, e.g. ``C{m*(k-2)+2}``; ``family_params`` gives the
integer range of every name used in the holes.  ``ANY`` matches every graph of
the domain, optionally minus an ``except`` list.  Two entries are rules rather
than templates: ``proper-supergraph`` and ``necessary-conditions``.
"""

from __future__ import annotations

import ast
import itertools
import json
import operator
import re
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable, Iterator, Optional

from .graphs import Graph, PatternError, canonical_key, in_domain_H, is_subgraph, make_pattern

__all__ = [
    "LE",
    "NLE",
    "ANY",
    "LedgerError",
    "Fact",
    "FactInstance",
    "FactLedger",
    "evaluate",
    "load_ledger",
]

LE = "LE"
NLE = "NLE"
ANY = "ANY"
RULES = ("proper-supergraph", "necessary-conditions")


class LedgerError(ValueError):
    pass


# ---------------------------------------------------------------------------
# expressions

_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.FloorDiv: operator.floordiv,
    ast.Mod: operator.mod,
    ast.Pow: operator.pow,
}


def evaluate(expr: str | int, env: dict[str, int]) -> int:
    """Evaluate a small integer expression (``+ - * // % **``, names, ints)."""
    if isinstance(expr, int):
        return expr
    try:
        tree = ast.parse(expr, mode="eval")
    except SyntaxError as exc:
        raise LedgerError(f"bad expression {expr!r}: {exc.msg}") from None

    def ev(node) -> int:
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return node.value
        if isinstance(node, ast.Name):
            if node.id not in env:
                raise LedgerError(f"unbound name {node.id!r} in {expr!r}")
            return env[node.id]
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
            return -ev(node.operand)
        raise LedgerError(f"unsupported syntax in {expr!r}")

    return ev(tree)


_HOLE = re.compile(r"\{([^{}]*)\}")


def _names(template: str) -> set[str]:
    found: set[str] = set()
    for hole in _HOLE.findall(template):
        for node in ast.walk(ast.parse(hole, mode="eval")):
            if isinstance(node, ast.Name):
                found.add(node.id)
    return found


def fill(template: str, env: dict[str, int]) -> str:
    return _HOLE.sub(lambda m: str(evaluate(m.group(1), env)), template)


def _instantiate(template: str, env: dict[str, int]) -> Optional[Graph]:
    try:
        return make_pattern(fill(template, env))
    except (PatternError, LedgerError):
        return None


# ---------------------------------------------------------------------------
# entries


@dataclass(frozen=True)
class ParamRange:
    start: int
    step: int = 1
    values: Optional[tuple[int, ...]] = None

    @classmethod
    def from_json(cls, data) -> "ParamRange":
        if "values" in data:
            return cls(min(data["values"]), 1, tuple(sorted(data["values"])))
        return cls(int(data.get("min", 1)), int(data.get("step", 1)))

    def upto(self, cap: int) -> Iterator[int]:
        if self.values is not None:
            yield from (v for v in self.values if v <= cap)
        else:
            yield from range(self.start, cap + 1, self.step)

    def to_json(self) -> dict:
        if self.values is not None:
            return {"values": list(self.values)}
        out = {"min": self.start}
        if self.step != 1:
            out["step"] = self.step
        return out


@dataclass(frozen=True)
class Fact:
    key: str
    h1: str
    h2: str
    relation: str
    source: str
    source_quote: str
    threshold: int | str | None = None
    family_params: dict[str, ParamRange] = field(default_factory=dict)
    except_: tuple = ()
    rule: Optional[str] = None

    @classmethod
    def from_json(cls, data: dict) -> "Fact":
        params = {k: ParamRange.from_json(v) for k, v in data.get("family_params", {}).items()}
        fact = cls(
            key=data["key"],
            h1=data["h1"],
            h2=data["h2"],
            relation=data["relation"],
            source=data.get("source", ""),
            source_quote=data.get("source_quote", ""),
            threshold=data.get("threshold"),
            family_params=params,
            except_=tuple(data.get("except", ())),
            rule=data.get("rule"),
        )
        fact.validate()
        return fact

    def validate(self) -> None:
        if self.relation not in (LE, NLE):
            raise LedgerError(f"{self.key}: relation must be LE or NLE")
        if not self.source_quote.strip():
            raise LedgerError(f"{self.key}: empty source quote")
        if self.rule is not None and self.rule not in RULES:
            raise LedgerError(f"{self.key}: unknown rule {self.rule!r}")
        free = set()
        for side in (self.h1, self.h2):
            if side != ANY:
                free |= _names(side)
        missing = free - set(self.family_params)
        if missing:
            raise LedgerError(f"{self.key}: no range for {sorted(missing)}")

    def to_json(self) -> dict:
        out = {"key": self.key, "h1": self.h1, "h2": self.h2}
        if self.family_params:
            out["family_params"] = {k: r.to_json() for k, r in self.family_params.items()}
        if self.except_:
            out["except"] = list(self.except_)
        if self.rule:
            out["rule"] = self.rule
        out.update(
            relation=self.relation,
            threshold=self.threshold,
            source=self.source,
            source_quote=self.source_quote,
        )
        return out

    @property
    def is_family(self) -> bool:
        return bool(self.family_params)

    def envs(self, cap: int) -> Iterator[dict[str, int]]:
        names = sorted(self.family_params)
        ranges = [list(self.family_params[n].upto(cap)) for n in names]
        for combo in itertools.product(*ranges):
            yield dict(zip(names, combo))

    def excluded_keys(self, env: dict[str, int]) -> set[str]:
        keys: set[str] = set()
        for item in self.except_:
            if isinstance(item, str):
                g = _instantiate(item, env)
                if g is not None:
                    keys.add(canonical_key(g))
                continue
            spec = item["spec"]
            inner = [n for n in item if n != "spec"]
            spans = []
            for n in inner:
                lo, hi = (evaluate(x, env) for x in item[n])
                spans.append(range(lo, hi + 1))
            for combo in itertools.product(*spans):
                g = _instantiate(spec, {**env, **dict(zip(inner, combo))})
                if g is not None:
                    keys.add(canonical_key(g))
        return keys

    def threshold_at(self, env: dict[str, int]) -> Optional[int]:
        if self.threshold is None:
            return None
        return evaluate(self.threshold, env)


@dataclass(frozen=True)
class FactInstance:
    """One ledger entry specialised to a concrete pair of graphs."""

    key: str
    relation: str
    h1: Graph
    h2: Graph
    threshold: Optional[int]
    params: tuple[tuple[str, int], ...] = ()

    @property
    def pair(self) -> tuple[str, str]:
        return canonical_key(self.h1), canonical_key(self.h2)

    def describe(self) -> str:
        args = ", ".join(f"{k}={v}" for k, v in self.params)
        return f"{self.key}({args})" if args else self.key


# ---------------------------------------------------------------------------
# ledger


class FactLedger:
    def __init__(self, facts: Iterable[Fact], version: int = 1):
        self.facts = list(facts)
        self.version = version
        keys = [f.key for f in self.facts]
        dup = {k for k in keys if keys.count(k) > 1}
        if dup:
            raise LedgerError(f"duplicate fact keys: {sorted(dup)}")
        self._by_key = {f.key: f for f in self.facts}

    @classmethod
    def from_json(cls, data: dict) -> "FactLedger":
        return cls((Fact.from_json(e) for e in data["entries"]), int(data.get("version", 1)))

    def to_json(self) -> dict:
        return {"version": self.version, "entries": [f.to_json() for f in self.facts]}

    def __len__(self) -> int:
        return len(self.facts)

    def __getitem__(self, key: str) -> Fact:
        return self._by_key[key]

    # -- instantiation -----------------------------------------------------

    def _side(self, fact: Fact, template: str, env, pool: dict[str, Graph]) -> list[Graph]:
        if template == ANY:
            excluded = fact.excluded_keys(env)
            return [g for key, g in pool.items() if key not in excluded]
        g = _instantiate(template, env)
        if g is None or g.order > self._pool_order or canonical_key(g) not in pool:
            return []
        return [pool[canonical_key(g)]]

    def instances(self, graphs: Iterable[Graph]) -> list[FactInstance]:
        """Every template instance whose two sides are both among ``graphs``.

        Rules are applied pairwise; families are instantiated with parameters
        up to the largest order present (every template grows with its
        parameters, so larger values cannot land in the pool).
        """
        pool: dict[str, Graph] = {}
        for g in graphs:
            if in_domain_H(g):
                pool.setdefault(canonical_key(g), g)
        self._pool_order = max((g.order for g in pool.values()), default=0)
        cap = self._pool_order + 2
        out: list[FactInstance] = []
        for fact in self.facts:
            if fact.rule is not None:
                out.extend(self._rule_instances(fact, pool))
                continue
            for env in fact.envs(cap):
                for a in self._side(fact, fact.h1, env, pool):
                    for b in self._side(fact, fact.h2, env, pool):
                        if a is b and fact.h1 == ANY and fact.h2 == ANY:
                            continue
                        out.append(
                            FactInstance(
                                fact.key,
                                fact.relation,
                                a,
                                b,
                                fact.threshold_at(env),
                                tuple(sorted(env.items())),
                            )
                        )
        return out

    def _rule_instances(self, fact: Fact, pool: dict[str, Graph]) -> list[FactInstance]:
        out = []
        for a in pool.values():
            for b in pool.values():
                if a is not b and self._rule_holds(fact.rule, a, b):
                    out.append(FactInstance(fact.key, fact.relation, a, b, None))
        return out

    @staticmethod
    def _rule_holds(rule: str, a: Graph, b: Graph) -> bool:
        if rule == "proper-supergraph":
            # a is a proper supergraph of b; the one exception is (K1,k+, K1,k)
            if canonical_key(a) == canonical_key(b) or not is_subgraph(b, a):
                return False
            return not _is_star_pair(a, b)
        from .enumeration import necessary_conditions

        return not necessary_conditions(a, b, refined=True).all_ok

    def lookup_all(self, h1: Graph, h2: Graph) -> list[FactInstance]:
        """All ledger entries that speak about the ordered pair ``(h1, h2)``."""
        return [
            inst for inst in self.instances([h1, h2])
            if inst.pair == (canonical_key(h1), canonical_key(h2))
        ]

    def lookup(self, h1: Graph, h2: Graph) -> Optional[FactInstance]:
        """The first LE instance for the pair, else the first NLE, else None."""
        found = self.lookup_all(h1, h2)
        for inst in found:
            if inst.relation == LE:
                return inst
        return found[0] if found else None

    def about(self, spec: Graph) -> list[tuple[Fact, list[dict[str, int]]]]:
        """Entries naming ``spec`` on a non-``ANY`` side, with the parameter
        values that produce it (``{}`` when the side is fixed)."""
        key = canonical_key(spec)
        out = []
        for fact in self.facts:
            hits = []
            for side in (fact.h1, fact.h2):
                if side == ANY:
                    continue
                if fact.is_family and _names(side):
                    cap = spec.order + 2
                    for env in fact.envs(cap):
                        g = _instantiate(side, env)
                        if g is not None and g.order == spec.order and canonical_key(g) == key:
                            hits.append(env)
                else:
                    g = _instantiate(side, {})
                    if g is not None and canonical_key(g) == key:
                        hits.append({})
            if hits:
                uniq = []
                for env in hits:
                    if env not in uniq:
                        uniq.append(env)
                out.append((fact, uniq))
        return out

    def check_consistency(self, graphs: Iterable[Graph]) -> list[tuple[FactInstance, FactInstance]]:
        """Pairs of instances asserting both LE and NLE for the same ordered pair."""
        by_pair: dict[tuple[str, str], dict[str, FactInstance]] = {}
        conflicts = []
        for inst in self.instances(graphs):
            slot = by_pair.setdefault(inst.pair, {})
            other = slot.get(LE if inst.relation == NLE else NLE)
            if other is not None:
                conflicts.append((other, inst))
            slot.setdefault(inst.relation, inst)
        return conflicts


def _is_star_pair(a: Graph, b: Graph) -> bool:
    k = b.order - 1
    if k < 3 or a.order != k + 2:
        return False
    return canonical_key(a) == canonical_key(make_pattern(f"K1,{k}+")) and canonical_key(b) == canonical_key(
        make_pattern(f"K1,{k}")
    )


def load_ledger(path=None) -> FactLedger:
    """Load the bundled ledger, or the JSON file at ``path``."""
    if path is None:
        text = resources.files("rainbow_preorder").joinpath("data/facts.json").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    return FactLedger.from_json(json.loads(text))
