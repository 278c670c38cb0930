"""Rules, rubrics and broad rubrics, with bounded least-fixpoint generation.

Set generation follows the inductive chain X_0 = {} and X_{n+1} = Gamma(X_n),
evaluated semi-naively: stage n+1 only fires rule applications that touch an
element first seen at stage n (or a rubric newly triggered by one). Family
generation runs the same chain over derivations instead of values.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Any, Callable, Iterable, Iterator, Mapping, NamedTuple, Sequence

from .encodings import (
    START, STAR, Tag, basic, build, classify, dsum, ntuple, pair, tup, unntuple, untup,
    von_neumann,
)
from .errors import (
    BudgetExceeded, DomainMismatch, IndexRejected, MalformedDerivation, NonFinitaryError,
    UnknownRule,
)
from .hfset import EMPTY, HfSet
from . import encodings as enc


# -- result families -----------------------------------------------------------

class ResultFamily:
    """A family (y_p) indexed by p in P."""

    def finite(self) -> bool:
        raise NotImplementedError

    def items(self) -> Iterable[tuple[HfSet, Any]]:
        raise NotImplementedError

    def __contains__(self, p) -> bool:
        raise NotImplementedError

    def __getitem__(self, p):
        raise NotImplementedError


@dataclass(frozen=True, eq=False)
class Explicit(ResultFamily):
    entries: Mapping[HfSet, Any]

    def finite(self) -> bool:
        return True

    def items(self):
        return self.entries.items()

    def __contains__(self, p) -> bool:
        return p in self.entries

    def __getitem__(self, p):
        return self.entries[p]


@dataclass(frozen=True, eq=False)
class Indexed(ResultFamily):
    """Family given by a membership test and an evaluator.

    ``enumerate``, when present, must yield exactly the member indices and
    terminate; without it the family counts as non-finitary.
    """
    contains: Callable[[HfSet], bool]
    value: Callable[[HfSet], Any]
    enumerate: Callable[[], Iterable[HfSet]] | None = None

    def finite(self) -> bool:
        return self.enumerate is not None

    def items(self):
        if self.enumerate is None:
            raise NonFinitaryError("indexed family has no bounded enumerator")
        return ((p, self.value(p)) for p in self.enumerate())

    def __contains__(self, p) -> bool:
        return bool(self.contains(p))

    def __getitem__(self, p):
        if not self.contains(p):
            raise KeyError(p)
        return self.value(p)


EMPTY_FAMILY = Explicit({})


def single(v) -> Explicit:
    """The one-element family indexed by 1 = {*}."""
    return Explicit({STAR: v})


def listed(values: Sequence) -> Explicit:
    """A family indexed by the numerals 0..n-1."""
    return Explicit({von_neumann(j): v for j, v in enumerate(values)})


# -- rules and rubrics ---------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Rule:
    arity: HfSet
    apply: Callable[[dict], ResultFamily]
    name: str = ""

    @property
    def positions(self) -> tuple:
        return self.arity.elements


@dataclass(frozen=True, eq=False)
class Rubric:
    """Rules indexed by things; ``domain`` is the class the rubric lives on.

    Tuples leaving the domain get the empty family, which is how a rubric on a
    subclass is extended to everything while staying supported on it.
    """
    rules: Mapping[HfSet, Rule] = field(default_factory=dict)
    domain: Callable[[Any], bool] | None = None

    @classmethod
    def of(cls, rules: Sequence[Rule], domain=None) -> "Rubric":
        return cls({von_neumann(j): r for j, r in enumerate(rules)}, domain)

    def fire(self, i: HfSet, args: dict) -> ResultFamily:
        if self.domain is not None and not all(self.domain(v) for v in args.values()):
            return EMPTY_FAMILY
        return self.rules[i].apply(args)

    def __len__(self) -> int:
        return len(self.rules)


EMPTY_RUBRIC = Rubric({})


@dataclass(frozen=True, eq=False)
class BroadRubric:
    """A basic rubric plus the rubric triggered by each thing.

    Triggers come from an explicit table, then an optional fallback callable,
    then the empty rubric.
    """
    basic: Rubric
    triggers: Mapping[Any, Rubric] = field(default_factory=dict)
    fallback: Callable[[Any], Rubric] | None = None

    def triggered(self, x) -> Rubric:
        try:
            hit = self.triggers.get(x)
        except TypeError:
            hit = None
        if hit is not None:
            return hit
        if self.fallback is not None:
            return self.fallback(x)
        return EMPTY_RUBRIC


@dataclass(frozen=True)
class Budget:
    depth: int = 64
    elements: int = 200_000
    fuel: int = 20_000_000

    def __post_init__(self):
        if self.depth < 0 or self.elements <= 0 or self.fuel <= 0:
            raise ValueError("budget bounds must be positive (depth may be 0)")


class Generated(NamedTuple):
    elements: frozenset
    stabilized: bool
    stage: dict  # element -> least n with element in X_n


@dataclass
class GeneratedFamily:
    entries: dict  # derivation -> value
    stabilized: bool
    stage: dict  # derivation -> depth

    def range(self) -> frozenset:
        return frozenset(self.entries.values())

    def __len__(self) -> int:
        return len(self.entries)


# -- one-step operator ---------------------------------------------------------

def _rubrics_over(r, xs: Iterable) -> Iterator[tuple[Rubric, Any]]:
    if isinstance(r, BroadRubric):
        yield r.basic, None
        for x in xs:
            yield r.triggered(x), x
    else:
        yield r, None


def gamma_step(r: Rubric | BroadRubric, X: Iterable) -> set:
    """Gamma_R(X), or Gamma_B(X) for a broad rubric."""
    xs = list(X)
    out = set()
    for rb, _ in _rubrics_over(r, xs):
        for i, rule in rb.rules.items():
            ks = rule.positions
            for combo in product(xs, repeat=len(ks)):
                for _, v in rb.fire(i, dict(zip(ks, combo))).items():
                    out.add(v)
    return out


def is_inductive(r: Rubric | BroadRubric, X: Iterable) -> bool:
    xs = set(X)
    return gamma_step(r, xs) <= xs


# -- the chain engine ----------------------------------------------------------

class _OutOfFuel(Exception):
    pass


class _Found(Exception):
    pass


def _semi_naive(k: int, old: list, new: list, every: list, full: bool):
    if full:
        yield from product(every, repeat=k)
        return
    if k == 0 or not new:
        return
    for j in range(k):
        yield from product(*([old] * j + [new] + [every] * (k - j - 1)))


def _chain(r: Rubric | BroadRubric, budget: Budget, family: bool):
    broad = isinstance(r, BroadRubric)
    base = r.basic if broad else r
    value: dict = {}  # node -> value (node is the value itself in set mode)
    stage: dict = {}
    nodes: list = []
    split = 0  # nodes[:split] are old, nodes[split:] arrived at the last stage
    fuel = budget.fuel
    n = 0
    while True:
        old, new = nodes[:split], nodes[split:]
        probing = n == budget.depth
        fresh: dict = {}

        def emit(key, v):
            if key not in value and key not in fresh:
                fresh[key] = v
                if probing:
                    raise _Found

        jobs = [(base, None, n == 0)]
        if broad:
            jobs += [(r.triggered(value[m]), m, False) for m in old]
            jobs += [(r.triggered(value[m]), m, True) for m in new]
        try:
            for rb, m, full in jobs:
                for i, rule in rb.rules.items():
                    ks = rule.positions
                    for combo in _semi_naive(len(ks), old, new, nodes, full):
                        fuel -= 1
                        if fuel < 0:
                            raise _OutOfFuel
                        fam = rb.fire(i, {k: value[c] for k, c in zip(ks, combo)})
                        g = tup(dict(zip(ks, combo))) if family else None
                        for p, v in fam.items():
                            fuel -= 1
                            if fuel < 0:
                                raise _OutOfFuel
                            if not family:
                                emit(v, v)
                            elif not broad:
                                emit(ntuple(i, g, p), v)
                            elif m is None:
                                emit(basic(i, g, p), v)
                            else:
                                emit(enc.trigger(m, i, g, p), v)
                        if len(value) + len(fresh) > budget.elements:
                            raise _OutOfFuel
        except _OutOfFuel:
            if family and not probing:
                raise BudgetExceeded(f"budget ran out while building stage {n + 1}") from None
            return value, stage, False
        except _Found:
            return value, stage, False
        if not fresh:
            return value, stage, True
        if probing:
            return value, stage, False
        split = len(nodes)
        n += 1
        for key, v in fresh.items():
            value[key] = v
            stage[key] = n
            nodes.append(key)


def generate_set(r: Rubric | BroadRubric, budget: Budget = Budget()) -> Generated:
    """Iterate the inductive chain to a fixpoint or until the budget runs out.

    On exhaustion the last complete stage is returned with stabilized=False.
    """
    value, stage, ok = _chain(r, budget, family=False)
    return Generated(frozenset(value), ok, stage)


def generate_family(r: Rubric | BroadRubric, budget: Budget = Budget()) -> GeneratedFamily:
    """All derivations of depth <= budget.depth, with their values.

    Unlike generate_set, running out of fuel or elements before the depth is
    reached raises BudgetExceeded: a partial family is not minimal.
    """
    value, stage, ok = _chain(r, budget, family=True)
    return GeneratedFamily(value, ok, stage)


# -- derivations ---------------------------------------------------------------

def _apply_checked(rb: Rubric, i: HfSet, g: HfSet, p: HfSet, evaluate) -> Any:
    rule = rb.rules.get(i)
    if rule is None:
        raise UnknownRule(f"no rule with index {enc.show(i)}")
    children = untup(g)
    if children is None:
        raise MalformedDerivation("the tuple of subderivations is not a function")
    if set(children) != set(rule.arity._raw):
        raise DomainMismatch(f"tuple domain differs from the arity of rule {enc.show(i)}")
    fam = rb.fire(i, {k: evaluate(d) for k, d in children.items()})
    if p not in fam:
        raise IndexRejected(f"index {enc.show(p)} is not in the result family of rule {enc.show(i)}")
    return fam[p]


def eval_derivation(r: Rubric, d: HfSet, _memo: dict | None = None) -> Any:
    memo = {} if _memo is None else _memo
    hit = memo.get(d)
    if hit is not None:
        return hit
    parts = unntuple(d, 3)
    if parts is None:
        raise MalformedDerivation("a derivation is a triple <i, g, p>")
    i, g, p = parts
    v = _apply_checked(r, i, g, p, lambda c: eval_derivation(r, c, memo))
    memo[d] = v
    return v


def eval_derivation_broad(b: BroadRubric, d: HfSet, _memo: dict | None = None) -> Any:
    memo = {} if _memo is None else _memo
    hit = memo.get(d)
    if hit is not None:
        return hit
    c = classify(d, "derivation")
    rec = lambda e: eval_derivation_broad(b, e, memo)
    if c.tag is Tag.Basic:
        i, g, p = c.args
        v = _apply_checked(b.basic, i, g, p, rec)
    elif c.tag is Tag.Trigger:
        m, i, g, p = c.args
        v = _apply_checked(b.triggered(rec(m)), i, g, p, rec)
    else:
        raise MalformedDerivation("expected Basic(i,g,p) or Trigger(m,i,g,p)")
    memo[d] = v
    return v


def derivation_depth(d: HfSet, broad: bool = False) -> int:
    if broad:
        c = classify(d, "derivation")
        if c.tag is Tag.Basic:
            g, extra = c.args[1], []
        elif c.tag is Tag.Trigger:
            g, extra = c.args[2], [c.args[0]]
        else:
            raise MalformedDerivation("not a broad derivation")
    else:
        parts = unntuple(d, 3)
        if parts is None:
            raise MalformedDerivation("not a derivation")
        g, extra = parts[1], []
    kids = list((untup(g) or {}).values()) + extra
    return 1 + max((derivation_depth(k, broad) for k in kids), default=0)


# -- constructions -------------------------------------------------------------

def hat_rubric(r: Rubric) -> BroadRubric:
    """Broad rubric with basic rubric r where everything triggers nothing."""
    return BroadRubric(r)


def _build_rule(x: HfSet, i: HfSet, arity: HfSet) -> Rule:
    return Rule(arity, lambda a: single(build(x, i, tup(a))), name="build")


def bracket_broadsig(G) -> BroadRubric:
    """The broad rubric [G]; G needs a method ``at(x)`` returning a Signature."""
    start = Rubric({STAR: Rule(EMPTY, lambda a: single(START), name="start")})

    def trig(x) -> Rubric:
        if not isinstance(x, HfSet):
            return EMPTY_RUBRIC
        return Rubric({i: _build_rule(x, i, k) for i, k in G.at(x).arities.items()})

    return BroadRubric(start, fallback=trig)


def bracket_reduced(F) -> BroadRubric:
    """Same for a reduced broad signature: one Make rule per thing."""
    begin = Rubric({STAR: Rule(EMPTY, lambda a: single(enc.BEGIN), name="begin")})

    def trig(x) -> Rubric:
        if not isinstance(x, HfSet):
            return EMPTY_RUBRIC
        return Rubric({STAR: Rule(F.at(x), lambda a: single(enc.make(x, tup(a))), name="make")})

    return BroadRubric(begin, fallback=trig)


def cover_lift_rule(rule: Rule, cover: Mapping[HfSet, HfSet]) -> Rule:
    """The rule <K,R>^delta with arity L = sum of the cover components.

    On tuples that are constant along every fibre it behaves like R on the
    collapsed tuple; elsewhere it yields the empty family.
    """
    if set(cover) != set(rule.arity._raw):
        raise ValueError("cover must be indexed exactly by the rule's arity")
    if any(len(d) == 0 for d in cover.values()):
        raise ValueError("cover components must be inhabited")
    lifted = dsum(cover)
    fibres = {k: [pair(k, d) for d in dk._raw] for k, dk in cover.items()}

    def apply(b: dict) -> ResultFamily:
        collapsed = {}
        for k, fib in fibres.items():
            vals = {id(b[j]): b[j] for j in fib}
            if len(vals) != 1:
                return EMPTY_FAMILY
            collapsed[k] = next(iter(vals.values()))
        return rule.apply(collapsed)

    return Rule(lifted, apply, name=f"{rule.name}^cover")


def cover_lift_rubric(r: Rubric, covers: Mapping[HfSet, Sequence[Mapping[HfSet, HfSet]]]) -> Rubric:
    """Rubric of lifted rules, indexed by <i, j> for the j-th cover of rule i."""
    rules = {}
    for i, rule in r.rules.items():
        for j, cov in enumerate(covers.get(i, ())):
            rules[pair(i, von_neumann(j))] = cover_lift_rule(rule, cov)
    return Rubric(rules, r.domain)


def family_via_terms(r: Rubric, depth: int) -> dict:
    """Family generated by r, built along the terms of its arity signature.

    For each term t = <i, [t_k]> the set M_t holds the triples <i, g, p> with
    g choosing an element of M_{t_k} at every k. Returns derivation -> value
    for all terms of height <= depth.
    """
    terms: list[tuple[int, dict]] = []  # (height of t, M_t with values)
    for h in range(1, depth + 1):
        prev = list(terms)
        for i, rule in r.rules.items():
            ks = rule.positions
            if not ks:
                if h == 1:
                    terms.append((1, {ntuple(i, EMPTY, p): y for p, y in r.fire(i, {}).items()}))
                continue
            for choice in product(prev, repeat=len(ks)):
                if max(c[0] for c in choice) != h - 1:
                    continue
                m_t: dict = {}
                for picks in product(*[list(c[1].items()) for c in choice]):
                    g = tup({k: d for k, (d, _) in zip(ks, picks)})
                    args = {k: v for k, (_, v) in zip(ks, picks)}
                    for p, y in r.fire(i, args).items():
                        m_t[ntuple(i, g, p)] = y
                terms.append((h, m_t))
    out: dict = {}
    for _, m_t in terms:
        out.update(m_t)
    return out


# -- numeric rules -------------------------------------------------------------

def numeric_rule(n: int, lower: Callable[[list[int]], int], value: Callable[[list[int], int], int],
                 window: int | None = None, ceiling: int | None = None, name: str = "") -> Rule:
    """Rule on naturals with arity n = {0..n-1} and result family
    (value(m, p))_{p >= lower(m)}.

    Inputs that are not numerals get the empty family, so the rule is
    supported on the naturals. Without ``window`` the family is infinite and
    Indexed; with it, only p in [lower, lower + window) is kept and values
    above ``ceiling`` are dropped, giving a finite Explicit family.
    """
    positions = [von_neumann(k) for k in range(n)]

    def apply(args: dict) -> ResultFamily:
        try:
            ms = [enc.to_nat(args[k]) for k in positions]
        except enc.NotANumeral:
            return EMPTY_FAMILY
        lo = lower(ms)
        if window is None:
            return Indexed(lambda p: enc.is_numeral(p) and len(p) >= lo,
                           lambda p: von_neumann(value(ms, len(p))))
        out = {}
        for p in range(max(lo, 0), max(lo, 0) + window):
            y = value(ms, p)
            if ceiling is None or y <= ceiling:
                out[von_neumann(p)] = von_neumann(y)
        return Explicit(out)

    return Rule(von_neumann(n), apply, name=name)
