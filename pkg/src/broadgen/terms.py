"""Signatures, S-terms, branches and results."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from operator import attrgetter
from typing import Mapping, Sequence

from .encodings import pair, show, signature_set, tup, unpair, untup, von_neumann
from .errors import BranchError, BudgetExceeded, NotATerm
from .genengine import Rubric, Rule, single
from .hfset import HfSet, STORE, intern, upair


@dataclass(frozen=True, eq=False)
class Signature:
    """A family of arity sets (K_i) indexed by symbols i."""
    arities: Mapping[HfSet, HfSet] = field(default_factory=dict)

    @classmethod
    def of(cls, table: Mapping[int, int | HfSet]) -> "Signature":
        """Convenience: naturals for symbols, naturals or sets for arities."""
        out = {}
        for i, k in table.items():
            out[von_neumann(i)] = von_neumann(k) if isinstance(k, int) else k
        return cls(out)

    def as_set(self) -> HfSet:
        return signature_set(self.arities)

    def __len__(self) -> int:
        return len(self.arities)


EMPTY_SIGNATURE = Signature({})


def term(i: HfSet, args: Mapping[HfSet, HfSet] | Sequence[HfSet] = ()) -> HfSet:
    return pair(i, tup(args))


def decode_term(t: HfSet) -> tuple[HfSet, dict[HfSet, HfSet]] | None:
    p = unpair(t)
    if p is None:
        return None
    args = untup(p[1])
    return None if args is None else (p[0], args)


def is_term(S: Signature, t: HfSet, _memo: dict | None = None) -> bool:
    memo = {} if _memo is None else _memo
    if t in memo:
        return memo[t]
    d = decode_term(t)
    ok = False
    if d is not None:
        i, args = d
        k = S.arities.get(i)
        ok = (k is not None and set(args) == set(k._raw)
              and all(is_term(S, a, memo) for a in args.values()))
    memo[t] = ok
    return ok


def height(t: HfSet) -> int:
    d = decode_term(t)
    if d is None:
        raise NotATerm("not a term")
    return 1 + max((height(a) for a in d[1].values()), default=0)


def generate_terms(S: Signature, depth: int, max_terms: int = 2_000_000) -> set:
    """All S-terms of height <= depth (a nullary term has height 1)."""
    if any(not isinstance(k, HfSet) for k in S.arities.values()):
        raise ValueError("arities must be finite sets")
    symbols = [(i, k.elements) for i, k in S.arities.items()]
    terms: list[HfSet] = []
    split = 0
    intern_raw = STORE.intern_raw
    # <k, a> pairs, the building blocks of every argument tuple, per position
    cols: dict[HfSet, list[HfSet]] = {}
    for n in range(depth):
        for k, col in cols.items():
            col.extend(pair(k, a) for a in terms[len(col):])
        for _, ks in symbols:
            for k in ks:
                if k not in cols:
                    cols[k] = [pair(k, a) for a in terms]
        fresh = []
        for i, ks in symbols:
            head = intern([i])
            m = len(ks)
            if n == 0:
                combos = [()] if m == 0 else []
            elif m == 0 or split == len(terms):
                combos = []
            else:
                olds = [cols[k][:split] for k in ks]
                news = [cols[k][split:] for k in ks]
                alls = [cols[k] for k in ks]
                combos = (c for j in range(m)
                          for c in product(*(olds[:j] + [news[j]] + alls[j + 1:])))
            for combo in combos:
                args = intern_raw(tuple(sorted(combo, key=_ident)))
                fresh.append(upair(head, upair(i, args)))
            if len(terms) + len(fresh) > max_terms:
                raise BudgetExceeded(f"more than {max_terms} terms")
        if not fresh:
            break
        split = len(terms)
        terms.extend(fresh)
    return set(terms)


_ident = attrgetter("id")



def term_rubric(S: Signature) -> Rubric:
    """Rubric whose generated set is the set of S-terms."""
    return Rubric({i: Rule(k, (lambda i: lambda a: single(term(i, a)))(i), name=show(i))
                   for i, k in S.arities.items()})


def branches(t: HfSet) -> set[tuple]:
    out = {()}
    d = decode_term(t)
    if d is None:
        raise NotATerm("not a term")
    for k, a in d[1].items():
        for b in branches(a):
            out.add((k,) + b)
    return out


def subterm(t: HfSet, b: Sequence[HfSet]) -> HfSet:
    """The term s_n at the end of the witness sequence for branch b."""
    cur = t
    for step, k in enumerate(b):
        d = decode_term(cur)
        if d is None or k not in d[1]:
            raise BranchError(f"branch not realizable at step {step}")
        cur = d[1][k]
    return cur


def result(t: HfSet, b: Sequence[HfSet] = ()) -> HfSet:
    d = decode_term(subterm(t, b))
    if d is None:
        raise BranchError("branch ends outside a term")
    return d[0]


def equal_by_branches(s: HfSet, t: HfSet) -> bool:
    """True iff every branch common to s and t has the same result in both."""
    common = branches(s) & branches(t)
    return all(result(s, b) is result(t, b) for b in common)


def show_term(t: HfSet) -> str:
    d = decode_term(t)
    if d is None:
        return show(t)
    i, args = d
    items = sorted(args.items(), key=lambda kv: kv[0].key)
    inner = ",".join(f"{show(k)}↦{show_term(a)}" for k, a in items)
    return f"{show(i)}({inner})"


def show_branch(b: Sequence[HfSet]) -> str:
    return "(" + ",".join(show(k) for k in b) + ")"
