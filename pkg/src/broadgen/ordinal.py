"""Ordinals below omega^omega in Cantor normal form, finite well-orders, and
Hartogs / Lindenbaum numbers of finite sets."""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import total_ordering
from itertools import combinations, permutations, product
from typing import Iterable

from .errors import BudgetExceeded, OrdinalError, WellOrderError
from .hfset import EMPTY, HfSet, intern, powerset


@total_ordering
@dataclass(frozen=True)
class OrdCNF:
    """Sum of w^e * c over ``terms`` with strictly decreasing exponents."""
    terms: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        prev = None
        for e, c in self.terms:
            if e < 0 or c < 1 or (prev is not None and e >= prev):
                raise OrdinalError(f"not in Cantor normal form: {self.terms}")
            prev = e

    @classmethod
    def of(cls, n: int) -> "OrdCNF":
        if n < 0:
            raise OrdinalError("negative ordinal")
        return cls(((0, n),)) if n else cls()

    @classmethod
    def from_numeral(cls, x: HfSet) -> "OrdCNF":
        from .encodings import to_nat
        return cls.of(to_nat(x))

    @property
    def is_finite(self) -> bool:
        return not self.terms or self.terms[0][0] == 0

    def to_int(self) -> int:
        if not self.is_finite:
            raise OrdinalError(f"{self} is infinite")
        return self.terms[0][1] if self.terms else 0

    def to_numeral(self) -> HfSet:
        from .encodings import von_neumann
        return von_neumann(self.to_int())

    def __lt__(self, other: "OrdCNF") -> bool:
        return compare(self, other) < 0

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.terms:
            if e == 0:
                parts.append(str(c))
            else:
                base = "w" if e == 1 else f"w^{e}"
                parts.append(base if c == 1 else f"{base}*{c}")
        return "+".join(parts)


ZERO = OrdCNF()
OMEGA = OrdCNF(((1, 1),))


def compare(a: OrdCNF, b: OrdCNF) -> int:
    for (e1, c1), (e2, c2) in zip(a.terms, b.terms):
        if e1 != e2:
            return 1 if e1 > e2 else -1
        if c1 != c2:
            return 1 if c1 > c2 else -1
    return (len(a.terms) > len(b.terms)) - (len(a.terms) < len(b.terms))


def succ(a: OrdCNF) -> OrdCNF:
    if a.terms and a.terms[-1][0] == 0:
        return OrdCNF(a.terms[:-1] + ((0, a.terms[-1][1] + 1),))
    return OrdCNF(a.terms + ((0, 1),))


def sup(xs: Iterable[OrdCNF]) -> OrdCNF:
    best = ZERO
    for x in xs:
        if x > best:
            best = x
    return best


def ssup(xs: Iterable[OrdCNF]) -> OrdCNF:
    """Least strict upper bound."""
    return sup(succ(x) for x in xs)


def add(a: OrdCNF, b: OrdCNF) -> OrdCNF:
    if not b.terms:
        return a
    lead = b.terms[0][0]
    keep = [t for t in a.terms if t[0] > lead]
    same = [t for t in a.terms if t[0] == lead]
    first = (lead, b.terms[0][1] + (same[0][1] if same else 0))
    return OrdCNF(tuple(keep) + (first,) + b.terms[1:])


def is_limit(a: OrdCNF) -> bool:
    return bool(a.terms) and a.terms[-1][0] >= 1


def is_successor(a: OrdCNF) -> bool:
    return bool(a.terms) and a.terms[-1][0] == 0


OMEGA_SYMBOL = "omega"


def is_k_complete(a: OrdCNF, k) -> bool:
    """Whether every K-tuple within a has supremum below a.

    k is a finite set (an HfSet) or OMEGA_SYMBOL. With K empty the only tuple
    has supremum 0, so the condition is a > 0. With K finite and inhabited the
    supremum of a tuple is its largest entry, so every a qualifies (vacuously
    when a = 0). For omega: a limit below w^w has cofinality omega, so a is
    omega-complete iff it is not a limit; ``cofinal_sequence`` exhibits the
    refuting tuple.
    """
    if k == OMEGA_SYMBOL:
        return not is_limit(a)
    if not isinstance(k, HfSet):
        raise TypeError("k must be a finite set or the omega symbol")
    if len(k) == 0:
        return a > ZERO
    return True


def cofinal_sequence(a: OrdCNF):
    """For a limit a = g + w^e (e >= 1), the map n -> g + w^(e-1)*n."""
    if not is_limit(a):
        raise OrdinalError(f"{a} is not a limit")
    e, c = a.terms[-1]
    head = a.terms[:-1] + (((e, c - 1),) if c > 1 else ())
    base = OrdCNF(head)

    def nth(n: int) -> OrdCNF:
        return add(base, OrdCNF(((e - 1, n),))) if n else base

    return nth


def is_regular(a: OrdCNF) -> bool:
    """Regular limit: a limit that is b-complete for every b < a.

    Below w^w only omega qualifies: every larger limit exceeds omega while
    failing omega-completeness.
    """
    return a == OMEGA


_TERM = re.compile(r"^(?:(w)(?:\^(\d+))?(?:\*(\d+))?|(\d+))$")


def parse_cnf(text: str) -> OrdCNF:
    """Parse text like 'w^2*3+w*1+4' (spaces allowed)."""
    s = text.replace(" ", "")
    if not s:
        raise OrdinalError("empty ordinal text")
    acc = ZERO
    for part in s.split("+"):
        m = _TERM.match(part)
        if m is None:
            raise OrdinalError(f"bad ordinal term {part!r}")
        if m.group(4) is not None:
            t = OrdCNF.of(int(m.group(4)))
        else:
            e = int(m.group(2)) if m.group(2) else 1
            c = int(m.group(3)) if m.group(3) else 1
            t = OrdCNF(((e, c),)) if c else ZERO
        acc = add(acc, t)
    return acc


# -- finite well-orders ----------------------------------------------------------

@dataclass(frozen=True)
class WellOrder:
    carrier: frozenset
    rel: frozenset  # pairs (a, b) meaning a precedes b

    def below(self, a) -> frozenset:
        return frozenset(x for x, y in self.rel if y is a or y == a)

    def validate(self) -> None:
        for x, y in self.rel:
            if x not in self.carrier or y not in self.carrier:
                raise WellOrderError("well-foundedness", "relation leaves the carrier")
        succs: dict = {a: set() for a in self.carrier}
        for x, y in self.rel:
            succs[x].add(y)
        for x, y in self.rel:
            for z in succs[y]:
                if z not in succs[x]:
                    raise WellOrderError("transitivity", f"missing pair for a chain through {y!r}")
        # a finite transitive relation is well-founded iff irreflexive
        for x, _ in self.rel:
            if x in succs[x]:
                raise WellOrderError("well-foundedness", f"{x!r} precedes itself")
        seen = {}
        for a in self.carrier:
            key = self.below(a)
            if key in seen:
                raise WellOrderError("extensionality", "two elements share their predecessors")
            seen[key] = a


def chain_order(items) -> WellOrder:
    """The well-order listing ``items`` in the given sequence."""
    items = list(items)
    return WellOrder(frozenset(items),
                     frozenset((items[i], items[j]) for i in range(len(items))
                               for j in range(i + 1, len(items))))


def order_type(w: WellOrder) -> tuple[OrdCNF, dict]:
    """Order type with the isomorphism a -> {theta b | b precedes a}."""
    w.validate()
    preds: dict = {a: [] for a in w.carrier}
    for x, y in w.rel:
        preds[y].append(x)
    theta: dict = {}
    for a in sorted(w.carrier, key=lambda a: len(preds[a])):
        theta[a] = intern(theta[b] for b in preds[a])
    image = intern(theta.values())
    from .encodings import is_numeral
    if not is_numeral(image):
        raise WellOrderError("extensionality", "image is not an ordinal")
    return OrdCNF.of(len(image)), theta


# -- cardinal comparisons --------------------------------------------------------

def preceq(A: Iterable, B: Iterable) -> bool:
    """An injection from A to B exists."""
    a, b = list(A), list(B)
    return next(permutations(b, len(a)), None) is not None


def preceq_star(A: Iterable, B: Iterable) -> bool:
    """A partial surjection from B onto A exists."""
    a, b = list(A), list(B)
    if not a:
        return True
    targets = set(range(len(a)))
    for choice in product(range(-1, len(a)), repeat=len(b)):
        if targets <= set(choice):
            return True
    return False


def _subsets(xs: list):
    for r in range(len(xs) + 1):
        yield from combinations(xs, r)


def _ordinal_of_types(types: set[int]) -> OrdCNF:
    n = 0
    while n in types:
        n += 1
    if any(t > n for t in types):
        raise OrdinalError("set of order types is not an ordinal")
    return OrdCNF.of(n)


def hartogs(K: HfSet, max_size: int = 10) -> OrdCNF:
    """The set of order types of well-ordered subsets of K."""
    xs = list(K.elements)
    if len(xs) > max_size:
        raise BudgetExceeded(f"Hartogs search over {len(xs)} elements")
    types = {order_type(chain_order(sub))[0].to_int() for sub in _subsets(xs)}
    return _ordinal_of_types(types)


def partial_partitions(xs: list):
    """All sets of pairwise disjoint inhabited subsets of xs (as lists of blocks)."""
    def go(i: int, blocks: list):
        if i == len(xs):
            yield [tuple(b) for b in blocks]
            return
        yield from go(i + 1, blocks)
        for b in blocks:
            b.append(xs[i])
            yield from go(i + 1, blocks)
            b.pop()
        blocks.append([xs[i]])
        yield from go(i + 1, blocks)
        blocks.pop()
    yield from go(0, [])


def lindenbaum(K: HfSet, max_size: int = 8) -> OrdCNF:
    """The set of order types of well-ordered partial partitions of K."""
    xs = list(K.elements)
    if len(xs) > max_size:
        raise BudgetExceeded(f"Lindenbaum search over {len(xs)} elements")
    types = set()
    for blocks in partial_partitions(xs):
        family = [intern(b) for b in blocks]
        types.add(order_type(chain_order(family))[0].to_int())
    return _ordinal_of_types(types)


def v_stage(n: int) -> HfSet:
    """V_n: powerset applied n times to the empty set."""
    if n > 5:
        raise BudgetExceeded("V_6 has 2^65536 elements")
    v = EMPTY
    for _ in range(n):
        v = powerset(v)
    return v
