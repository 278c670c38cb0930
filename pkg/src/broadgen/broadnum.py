"""Broad and reduced broad signatures, broad numbers, and the translations
between broad numbers and their reduced encodings, and between derivations
and pseudo-derivations."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Any, Callable, Mapping

from .encodings import (
    BEGIN, NIL, START, START_P, STAR, Tag, basic, basic_p, bu2, build, classify, make,
    trigger, trigger_p, tup, untup,
)
from .errors import BudgetExceeded, MalformedDerivation, NotBroadNumber
from .genengine import BroadRubric, Budget
from .hfset import EMPTY, HfSet, intern
from .ordinal import OrdCNF, ssup
from .terms import EMPTY_SIGNATURE, Signature


@dataclass(frozen=True, eq=False)
class BroadSignature:
    """Function from things to signatures: table, then fallback, then default."""
    table: Mapping[HfSet, Signature] = field(default_factory=dict)
    default: Signature = EMPTY_SIGNATURE
    fallback: Callable[[HfSet], Signature | None] | None = None

    def at(self, x: HfSet) -> Signature:
        hit = self.table.get(x)
        if hit is None and self.fallback is not None:
            hit = self.fallback(x)
        return self.default if hit is None else hit


@dataclass(frozen=True, eq=False)
class ReducedBroadSignature:
    table: Mapping[HfSet, HfSet] = field(default_factory=dict)
    default: HfSet = EMPTY
    fallback: Callable[[HfSet], HfSet | None] | None = None

    def at(self, x: HfSet) -> HfSet:
        hit = self.table.get(x)
        if hit is None and self.fallback is not None:
            hit = self.fallback(x)
        return self.default if hit is None else hit


# -- generation ------------------------------------------------------------------

def _tuples(ks: tuple, old: list, new: list, every: list, full: bool):
    m = len(ks)
    if full:
        yield from product(every, repeat=m)
    elif m and new:
        for j in range(m):
            yield from product(*([old] * j + [new] + [every] * (m - j - 1)))


def _worklist(atom: HfSet, steps: Callable, depth: int, budget: Budget) -> tuple[dict, bool]:
    """Shared chain X_1 = {atom}, X_{n+1} = Gamma(X_n) up to X_{depth+1}.

    ``steps(x)`` lists (arity positions, constructor) for each rule fired by x.
    Returns the stage map (x -> least n with x in X_n) and whether the chain
    stabilized. Running out of fuel or elements before reaching the depth
    raises BudgetExceeded.
    """
    stage = {atom: 1}
    nodes = [atom]
    split = 0
    fuel = budget.fuel
    for n in range(1, depth + 2):
        old, new = nodes[:split], nodes[split:]
        fresh: list[HfSet] = []
        seen = set()
        probing = n == depth + 1
        for x in nodes:
            full = stage[x] == n
            for ks, make_one in steps(x):
                for combo in _tuples(ks, old, new, nodes, full):
                    fuel -= 1
                    if fuel < 0:
                        if probing:
                            return stage, False
                        raise BudgetExceeded(f"fuel ran out while building stage {n + 1}")
                    y = make_one(dict(zip(ks, combo)))
                    if y not in stage and y not in seen:
                        if probing:
                            return stage, False
                        seen.add(y)
                        fresh.append(y)
                        if len(nodes) + len(fresh) > budget.elements:
                            raise BudgetExceeded(
                                f"stage {n + 1} exceeds {budget.elements} elements")
        if not fresh:
            return stage, True
        split = len(nodes)
        for y in fresh:
            stage[y] = n + 1
        nodes.extend(fresh)
    return stage, False


def _broad_steps(G: BroadSignature):
    def steps(x):
        return [(k.elements, (lambda x, i: lambda a: build(x, i, tup(a)))(x, i))
                for i, k in G.at(x).arities.items()]
    return steps


def broad_stages(G: BroadSignature, depth: int, budget: Budget = Budget()) -> tuple[dict, bool]:
    return _worklist(START, _broad_steps(G), depth, budget)


def generate_broad(G: BroadSignature, depth: int, budget: Budget = Budget()) -> frozenset:
    """G-broad numbers of constructor depth <= depth (Start has depth 0)."""
    return frozenset(broad_stages(G, depth, budget)[0])


def generate_reduced(F: ReducedBroadSignature, depth: int, budget: Budget = Budget()) -> frozenset:
    def steps(x):
        return [(F.at(x).elements, lambda a: make(x, tup(a)))]
    return frozenset(_worklist(BEGIN, steps, depth, budget)[0])


def is_broad_number(G: BroadSignature, x: HfSet, _memo: dict | None = None) -> bool:
    memo = {} if _memo is None else _memo
    if x in memo:
        return memo[x]
    if x is START:
        return True
    c = classify(x, "broad")
    ok = False
    if c.tag is Tag.Build:
        w, i, a = c.args
        args = untup(a)
        if args is not None and is_broad_number(G, w, memo):
            k = G.at(w).arities.get(i)
            ok = (k is not None and set(args) == set(k._raw)
                  and all(is_broad_number(G, v, memo) for v in args.values()))
    memo[x] = ok
    return ok


def is_reduced_broad_number(F: ReducedBroadSignature, x: HfSet, _memo: dict | None = None) -> bool:
    memo = {} if _memo is None else _memo
    if x in memo:
        return memo[x]
    if x is BEGIN:
        return True
    c = classify(x, "reduced")
    ok = False
    if c.tag is Tag.Make:
        w, a = c.args
        args = untup(a)
        ok = (args is not None and is_reduced_broad_number(F, w, memo)
              and set(args) == set(F.at(w)._raw)
              and all(is_reduced_broad_number(F, v, memo) for v in args.values()))
    memo[x] = ok
    return ok


# -- broad numbers <-> reduced encodings ----------------------------------------

def theta_reduce(direction: str, x: HfSet, G: BroadSignature | None = None,
                 _memo: dict | None = None) -> HfSet:
    """direction 'forward': Start' / Bu2 terms to broad numbers.
    direction 'backward': G-broad numbers to their Start' / Bu2 encodings."""
    memo = {} if _memo is None else _memo
    hit = memo.get(x)
    if hit is not None:
        return hit
    if direction == "forward":
        c = classify(x, "reduced2")
        if c.tag is Tag.StartP:
            out = START
        elif c.tag is Tag.Bu2:
            w, _sig, i, a = c.args
            f = untup(a)
            out = build(theta_reduce("forward", w, G, memo), i,
                        tup({k: theta_reduce("forward", v, G, memo) for k, v in f.items()}))
        else:
            raise NotBroadNumber("not built from Start' and Bu2")
    elif direction == "backward":
        if G is None:
            raise ValueError("the inverse translation needs the broad signature")
        if x is START:
            out = START_P
        else:
            c = classify(x, "broad")
            f = untup(c.args[2]) if c.tag is Tag.Build else None
            if f is None:
                raise NotBroadNumber("not built from Start and Build")
            w, i, _ = c.args
            sig = G.at(w)
            k = sig.arities.get(i)
            if k is None or set(f) != set(k._raw):
                raise NotBroadNumber("Build step does not match the signature at its left part")
            out = bu2(theta_reduce("backward", w, G, memo), sig.as_set(), i,
                      tup({kk: theta_reduce("backward", v, G, memo) for kk, v in f.items()}))
    else:
        raise ValueError("direction is 'forward' or 'backward'")
    memo[x] = out
    return out


def generate_u(G: BroadSignature, depth: int, budget: Budget = Budget()) -> frozenset:
    """The reduced encodings of G-broad numbers, generated directly."""
    memo: dict = {}

    def steps(u):
        x = theta_reduce("forward", u, None, memo)
        sig = G.at(x)
        s = sig.as_set()
        return [(k.elements, (lambda i, s: lambda a: bu2(u, s, i, tup(a)))(i, s))
                for i, k in sig.arities.items()]

    return frozenset(_worklist(START_P, steps, depth, budget)[0])


def reducing_signature(G: BroadSignature) -> ReducedBroadSignature:
    """Reduced broad signature F whose broad numbers include the encodings.

    Make(w, []) with w an encoded number gets arity I + sum of K_i, where
    (K_i) is the signature G assigns to the decoded number; all else gets {}.
    """
    from .encodings import inl, inr, pair

    def arity(x: HfSet) -> HfSet | None:
        c = classify(x, "reduced")
        if c.tag is not Tag.Make or c.args[1] is not NIL:
            return None
        try:
            w = theta_reduce("forward", c.args[0])
        except NotBroadNumber:
            return None
        sig = G.at(w)
        return intern([inl(i) for i in sig.arities]
                      + [inr(pair(i, k)) for i, kk in sig.arities.items() for k in kk._raw])

    return ReducedBroadSignature(fallback=arity)


# -- derivations <-> pseudo-derivations -----------------------------------------

def theta_derivs(direction: str, d: HfSet, _memo: dict | None = None) -> HfSet:
    """'forward' retags Basic'/Trigger' as Basic/Trigger; 'backward' undoes it."""
    memo = {} if _memo is None else _memo
    hit = memo.get(d)
    if hit is not None:
        return hit
    rec = lambda e: theta_derivs(direction, e, memo)
    if direction == "forward":
        c = classify(d, "pseudo")
        if c.tag is Tag.BasicP:
            i, g, p = c.args
            out = basic(i, _map_tuple(g, rec), p)
        elif c.tag is Tag.TriggerP:
            m, i, g, p = c.args
            out = trigger(rec(m), i, _map_tuple(g, rec), p)
        else:
            raise MalformedDerivation("expected Basic' or Trigger'")
    elif direction == "backward":
        c = classify(d, "derivation")
        if c.tag is Tag.Basic:
            i, g, p = c.args
            out = basic_p(i, _map_tuple(g, rec), p)
        elif c.tag is Tag.Trigger:
            m, i, g, p = c.args
            out = trigger_p(rec(m), i, _map_tuple(g, rec), p)
        else:
            raise MalformedDerivation("expected Basic or Trigger")
    else:
        raise ValueError("direction is 'forward' or 'backward'")
    memo[d] = out
    return out


def _map_tuple(g: HfSet, f) -> HfSet:
    entries = untup(g)
    if entries is None:
        raise MalformedDerivation("subderivations must form a tuple")
    return tup({k: f(v) for k, v in entries.items()})


def eval_pseudo(b: BroadRubric, d: HfSet, _memo: dict | None = None) -> Any:
    """Value of a pseudo-derivation, read directly off Basic'/Trigger'."""
    from .genengine import _apply_checked

    memo = {} if _memo is None else _memo
    hit = memo.get(d)
    if hit is not None:
        return hit
    rec = lambda e: eval_pseudo(b, e, memo)
    c = classify(d, "pseudo")
    if c.tag is Tag.BasicP:
        i, g, p = c.args
        v = _apply_checked(b.basic, i, g, p, rec)
    elif c.tag is Tag.TriggerP:
        m, i, g, p = c.args
        v = _apply_checked(b.triggered(rec(m)), i, g, p, rec)
    else:
        raise MalformedDerivation("expected Basic' or Trigger'")
    memo[d] = v
    return v


def pseudo_signature(b: BroadRubric) -> BroadSignature:
    """The broad signature under which every pseudo-derivation is a broad number.

    Start gets the basic rubric's arities; Build(Start, i, f) gets one nullary
    symbol per index p of the result family; a pseudo-derivation l gets a single
    nullary symbol *; Build(l, *, []) gets the arities of the rubric triggered by
    the value of l; Build(Build(l, *, []), i, f) again one nullary symbol per p.
    Families must be finite for the signature to be a finite table.
    """
    memo: dict = {}

    def value(l: HfSet):
        try:
            return True, eval_pseudo(b, l, memo)
        except (MalformedDerivation, ValueError):
            return False, None

    def family_sig(rb, i, f):
        rule = rb.rules.get(i)
        args = untup(f)
        if rule is None or args is None or set(args) != set(rule.arity._raw):
            return None
        vals = {}
        for k, l in args.items():
            ok, v = value(l)
            if not ok:
                return None
            vals[k] = v
        return Signature({p: EMPTY for p, _ in rb.fire(i, vals).items()})

    def at(x: HfSet) -> Signature | None:
        if x is START:
            return Signature({i: r.arity for i, r in b.basic.rules.items()})
        ok, _ = value(x)
        if ok:
            return Signature({STAR: EMPTY})
        c = classify(x, "broad")
        if c.tag is not Tag.Build:
            return None
        w, i, f = c.args
        if w is START:
            return family_sig(b.basic, i, f)
        if i is STAR and f is NIL:
            # rule index 0 is also *, so fall through when w is no derivation
            ok, u = value(w)
            if ok:
                rb = b.triggered(u)
                return Signature({j: r.arity for j, r in rb.rules.items()})
        inner = classify(w, "broad")
        if inner.tag is Tag.Build and inner.args[1] is STAR and inner.args[2] is NIL:
            ok, u = value(inner.args[0])
            if ok:
                return family_sig(b.triggered(u), i, f)
        return None

    return BroadSignature(fallback=at)


# -- rank ------------------------------------------------------------------------

def broad_rank(w: HfSet, G: BroadSignature | None = None, _memo: dict | None = None) -> OrdCNF:
    """r(Start) = 0 and r(Build(x, i, [a_k])) = ssup({r(x)} + {r(a_k)})."""
    memo = {} if _memo is None else _memo
    hit = memo.get(w)
    if hit is not None:
        return hit
    if w is START:
        out = OrdCNF.of(0)
    else:
        c = classify(w, "broad")
        f = untup(c.args[2]) if c.tag is Tag.Build else None
        if f is None:
            raise NotBroadNumber("not built from Start and Build")
        if G is not None:
            k = G.at(c.args[0]).arities.get(c.args[1])
            if k is None or set(f) != set(k._raw):
                raise NotBroadNumber("Build step does not match the signature")
        parts = [broad_rank(c.args[0], G, memo)] + [broad_rank(a, G, memo) for a in f.values()]
        out = ssup(parts)
    memo[w] = out
    return out


def show_broad(x: HfSet, group: str = "broad") -> str:
    """Structural form Build(...,...,[...]) (or Make(...,[...]) for reduced)."""
    from .encodings import show
    c = classify(x, group)
    if c.tag in (Tag.Start, Tag.Begin):
        return c.tag.name
    if c.tag is Tag.Build:
        w, i, f = c.args
        return f"Build({show_broad(w)},{show(i)},{_show_tuple(f, group)})"
    if c.tag is Tag.Make:
        w, f = c.args
        return f"Make({show_broad(w, group)},{_show_tuple(f, group)})"
    return show(x)


def _show_tuple(f: HfSet, group: str) -> str:
    from .encodings import show
    entries = untup(f)
    if entries is None:
        return show(f)
    items = sorted(entries.items(), key=lambda kv: kv[0].key)
    return "[" + ",".join(f"{show(k)}↦{show_broad(v, group)}" for k, v in items) + "]"
