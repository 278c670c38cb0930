"""Brute-force reference implementations for the test suite.

Nothing here imports the generation engine, the encodings or the ordinal
module. Sets are compared through plain nested frozensets rather than through
the interning store, pairs and tuples are rebuilt locally, and every search is
exhaustive. Caps are hard errors: an oracle that cannot decide raises
OracleNotApplicable instead of guessing.
"""
from __future__ import annotations

from itertools import combinations, permutations, product
from typing import Iterable

import numpy as np

from .errors import OracleNotApplicable
from .hfset import HfSet, intern


def _thaw(x: HfSet, memo: dict) -> frozenset:
    """The set as nested Python frozensets, independent of interning."""
    hit = memo.get(id(x))
    if hit is None:
        hit = frozenset(_thaw(y, memo) for y in x._raw)
        memo[id(x)] = hit
    return hit


def _rubrics(r, xs: list) -> list:
    if hasattr(r, "basic"):
        return [r.basic] + [r.triggered(x) for x in xs]
    return [r]


def _gamma(r, xs: list) -> list:
    out = []
    for rb in _rubrics(r, xs):
        for i, rule in rb.rules.items():
            ks = list(rule.arity._raw)
            for combo in product(xs, repeat=len(ks)):
                fam = rb.fire(i, dict(zip(ks, combo)))
                out.extend(v for _, v in fam.items())
    return out


def naive_generate(r, cap: int = 64) -> set:
    """Least fixpoint by repeated full rescans of everything accepted so far."""
    memo: dict = {}
    found: dict = {}
    while True:
        xs = list(found.values())
        grown = False
        for v in _gamma(r, xs):
            key = _thaw(v, memo)
            if key not in found:
                found[key] = v
                grown = True
                if len(found) > cap:
                    raise OracleNotApplicable(f"closure has more than {cap} elements")
        if not grown:
            return set(found.values())


def _inductive(r, ys: list, memo: dict) -> bool:
    keys = {_thaw(y, memo) for y in ys}
    return all(_thaw(v, memo) in keys for v in _gamma(r, ys))


def minimality_check(r, X: Iterable[HfSet], max_size: int = 12) -> bool:
    """True iff X is inductive and no proper subset of X is.

    Subsets are searched exhaustively; every inductive subset must contain the
    outputs of the nullary rules, so only supersets of those are tried.
    """
    xs = list(X)
    if len(xs) > max_size:
        raise OracleNotApplicable(f"{len(xs)} elements exceed the cap of {max_size}")
    memo: dict = {}
    if not _inductive(r, xs, memo):
        raise OracleNotApplicable("X is not inductive, so minimality is vacuous")
    forced = {_thaw(v, memo) for v in _gamma(r, [])}
    must = [x for x in xs if _thaw(x, memo) in forced]
    rest = [x for x in xs if _thaw(x, memo) not in forced]
    if len(must) < len({_thaw(v, memo) for v in _gamma(r, [])}):
        return False
    for size in range(len(rest)):
        for extra in combinations(rest, size):
            if _inductive(r, must + list(extra), memo):
                return False
    return True


# -- family minimality, with locally rebuilt derivation keys ----------------------

def _pair(x: HfSet, y: HfSet) -> HfSet:
    return intern([intern([x]), intern([x, y])])


def _numeral(n: int) -> HfSet:
    x = intern([])
    for _ in range(n):
        x = intern(list(x._raw) + [x])
    return x


def _triple(i: HfSet, g: HfSet, p: HfSet) -> HfSet:
    return intern([_pair(_numeral(0), i), _pair(_numeral(1), g), _pair(_numeral(2), p)])


def _family_gamma(r, keys: list, value: dict) -> list:
    out = []
    for i, rule in r.rules.items():
        ks = list(rule.arity._raw)
        for combo in product(keys, repeat=len(ks)):
            g = intern([_pair(k, d) for k, d in zip(ks, combo)])
            fam = r.fire(i, {k: value[d] for k, d in zip(ks, combo)})
            out.extend((_triple(i, g, p), v) for p, v in fam.items())
    return out


def family_minimality_check(r, family: dict, max_size: int = 12) -> bool:
    """For a plain rubric: the family (derivation -> value) is inductive and
    has no relatively inductive proper subset of keys."""
    keys = list(family)
    if len(keys) > max_size:
        raise OracleNotApplicable(f"{len(keys)} entries exceed the cap of {max_size}")
    memo: dict = {}

    def inductive(sub: list) -> bool:
        inside = {_thaw(k, memo): family[k] for k in sub}
        for d, v in _family_gamma(r, sub, family):
            hit = inside.get(_thaw(d, memo))
            if hit is None or _thaw(hit, memo) != _thaw(v, memo):
                return False
        return True

    if not inductive(keys):
        raise OracleNotApplicable("the family is not inductive")
    for size in range(len(keys)):
        for sub in combinations(keys, size):
            if inductive(list(sub)):
                return False
    return True


# -- cardinal comparisons --------------------------------------------------------

def brute_injection(A: Iterable, B: Iterable, cap: int = 6) -> dict | None:
    a, b = list(A), list(B)
    if len(a) > cap or len(b) > cap:
        raise OracleNotApplicable(f"sets larger than {cap}")
    for image in permutations(b, len(a)):
        return dict(zip(a, image))
    return None


def brute_partial_surjection(A: Iterable, B: Iterable, cap: int = 6) -> dict | None:
    """A partial function from B onto A, as a dict on its domain."""
    a, b = list(A), list(B)
    if len(a) > cap or len(b) > cap:
        raise OracleNotApplicable(f"sets larger than {cap}")
    for choice in product([None, *range(len(a))], repeat=len(b)):
        if set(range(len(a))) <= set(choice):
            return {x: a[c] for x, c in zip(b, choice) if c is not None}
    return None


def brute_hartogs(K: Iterable, cap: int = 6) -> int:
    """Least n with no injection from n into K."""
    k = list(K)
    n = 0
    while brute_injection(range(n), k, cap=max(cap, n)) is not None:
        n += 1
    return n


def brute_lindenbaum(K: Iterable, cap: int = 6) -> int:
    """Least n that is not a partial-surjective image of K."""
    k = list(K)
    n = 0
    while brute_partial_surjection(range(n), k, cap=max(cap, n)) is not None:
        n += 1
    return n


def brute_order_type(carrier: Iterable, precedes) -> int:
    """Order type of a finite linear order: the count of its elements, after
    checking by brute force that ``precedes`` is a strict total order."""
    xs = list(carrier)
    for x in xs:
        if precedes(x, x):
            raise OracleNotApplicable("relation is reflexive somewhere")
    for x, y in permutations(xs, 2):
        if precedes(x, y) == precedes(y, x):
            raise OracleNotApplicable("relation is not a strict total order")
    for x, y, z in permutations(xs, 3):
        if precedes(x, y) and precedes(y, z) and not precedes(x, z):
            raise OracleNotApplicable("relation is not transitive")
    return len(xs)


def value_closure(rules: list, triggers: dict, depth: int, p_max: int, v_max: int) -> list[set]:
    """Value-level closure for rubrics on naturals, by depth.

    ``rules`` lists (arity, lower(m), value(m, p)) integer formulas; ``triggers``
    maps a natural to further such rule lists. Returns V_1..V_depth restricted
    to indices p <= p_max and values <= v_max. Used to bound the least value of
    the derivations of a given depth exhaustively.

    Value formulas must accept a numpy array for p. Pruning over the inputs
    assumes each formula is nondecreasing in p and in every input, and each
    lower bound is nondecreasing in every input; the caller is responsible for
    that. Under it, the partial tuple (m_0..m_j) padded with the least
    available value bounds every completion from below.
    """
    levels: list[set] = []
    cur: set = set()
    for _ in range(depth):
        pool = sorted(cur)
        active = list(rules)
        for t, extra in triggers.items():
            if t in cur:
                active.extend(extra)
        hit = np.zeros(v_max + 1, dtype=bool)
        for n, lower, value in active:
            _extend(n, lower, value, pool, [], p_max, v_max, hit)
        nxt = set(cur) | {int(v) for v in np.flatnonzero(hit)}
        levels.append(nxt)
        cur = nxt
    return levels


def _extend(n, lower, value, pool, ms, p_max, v_max, hit) -> None:
    if len(ms) == n:
        lo = max(lower(ms), 0)
        if lo <= p_max:
            vs = np.asarray(value(ms, np.arange(lo, p_max + 1, dtype=np.int64)))
            vs = np.broadcast_to(vs, (p_max + 1 - lo,))
            hit[vs[(vs >= 0) & (vs <= v_max)]] = True
        return
    for m in pool:
        trial = ms + [m] + [pool[0]] * (n - len(ms) - 1)
        lo = max(lower(trial), 0)
        if lo > p_max or value(trial, lo) > v_max:
            break
        _extend(n, lower, value, pool, ms + [m], p_max, v_max, hit)
