"""Spections: classes given by a child-set map, with generated and cogenerated
classes, recursion by attempts, and fam-spections generating large families.

A spection is a pair of callbacks. ``suitable(e)`` says whether e is in M and
``children(e)`` gives J(e) for suitable e. Everything here works on the finite
M-descendant set of the element asked about, so a spection whose descendant
sets are infinite only fails by running out of fuel.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Iterable

from .encodings import Tag, classify, unntuple, untup
from .errors import BudgetExceeded, NotGenerated
from .hfset import HfSet, element_set, intern, is_transitive, strict_descendants
from .terms import Signature, decode_term, term

DEFAULT_FUEL = 1_000_000


@dataclass(frozen=True, eq=False)
class Spection:
    suitable: Callable[[HfSet], bool]
    children: Callable[[HfSet], Iterable[HfSet]]
    introspective: bool = False
    name: str = ""

    def kids(self, e: HfSet) -> tuple:
        return tuple(self.children(e)) if self.suitable(e) else ()


def _reach(s: Spection, e: HfSet, fuel: int) -> list[HfSet]:
    """Elements of the M-descendant set of e, e first, in discovery order."""
    seen = {e}
    order = [e]
    j = 0
    while j < len(order):
        x = order[j]
        j += 1
        for c in s.kids(x):
            fuel -= 1
            if fuel < 0:
                raise BudgetExceeded("M-descendant set did not close within the fuel")
            if c not in seen:
                seen.add(c)
                order.append(c)
    return order


def m_descendant_set(s: Spection, e: HfSet, fuel: int = DEFAULT_FUEL) -> HfSet:
    """Union of J^n(e): the least M-transitive set containing e."""
    return intern(_reach(s, e, fuel))


def check_introspective(s: Spection, e: HfSet, fuel: int = DEFAULT_FUEL) -> bool:
    """Whether J(x) lies in the strict descendants of x throughout the
    M-descendant set of e."""
    for x in _reach(s, e, fuel):
        kids = s.kids(x)
        if kids and not set(kids) <= set(strict_descendants(x)._raw):
            return False
    return True


def gamma(s: Spection, A: Iterable[HfSet], universe: Iterable[HfSet]) -> frozenset:
    """Gamma_M(A) cut down to a finite universe: suitable e with J(e) in A."""
    a = set(A)
    return frozenset(e for e in universe if s.suitable(e) and set(s.children(e)) <= a)


def _stages(s: Spection, e: HfSet, fuel: int) -> dict:
    """Least fixpoint of Gamma_M inside the M-descendant set of e.

    Maps each generated element to its stage; the order of insertion lists
    children before parents.
    """
    reach = _reach(s, e, fuel)
    parents: dict = {x: [] for x in reach}
    missing: dict = {}
    ready = []
    for x in reach:
        if not s.suitable(x):
            continue
        kids = set(s.children(x))
        missing[x] = len(kids)
        for c in kids:
            parents[c].append(x)
        if not kids:
            ready.append(x)
    stage: dict = {}
    level = 1
    while ready:
        nxt = []
        for x in ready:
            stage[x] = level
        for x in ready:
            for p in parents[x]:
                missing[p] -= 1
                if missing[p] == 0:
                    nxt.append(p)
        ready = nxt
        level += 1
    return stage


def generated_part(s: Spection, e: HfSet, fuel: int = DEFAULT_FUEL) -> frozenset:
    """The generated elements within the M-descendant set of e."""
    return frozenset(_stages(s, e, fuel))


def derivation_term(s: Spection, e: HfSet, fuel: int = DEFAULT_FUEL) -> HfSet | None:
    """The derivation of e: the term <e, [t_b]_{b in J(e)}> with each t_b a
    derivation of b, over the signature (J(x)) for x in the M-descendant set.
    None when e has no derivation."""
    stage = _stages(s, e, fuel)
    if e not in stage:
        return None
    built: dict = {}
    for x in sorted(stage, key=stage.__getitem__):
        built[x] = term(x, {b: built[b] for b in s.children(x)})
    return built[e]


def derivation_signature(s: Spection, e: HfSet, fuel: int = DEFAULT_FUEL) -> Signature:
    """S_e: symbols are the suitable descendants x, with arity J(x)."""
    return Signature({x: intern(s.children(x)) for x in _reach(s, e, fuel) if s.suitable(x)})


def is_generated(s: Spection, e: HfSet, fuel: int = DEFAULT_FUEL) -> bool:
    return derivation_term(s, e, fuel) is not None


def is_cogenerated(s: Spection, e: HfSet, fuel: int = DEFAULT_FUEL) -> bool:
    """Every M-descendant of e is suitable."""
    return all(s.suitable(x) for x in _reach(s, e, fuel))


def generate_within(s: Spection, universe: Iterable[HfSet]) -> frozenset:
    """Least fixpoint of Gamma_M relative to a finite universe."""
    u = list(universe)
    cur: frozenset = frozenset()
    while True:
        nxt = gamma(s, cur, u)
        if nxt == cur:
            return cur
        cur = nxt


def recurse(s: Spection, step: Callable[[HfSet, dict], Any], e: HfSet,
            fuel: int = DEFAULT_FUEL) -> Any:
    """F(e) for the unique F with F(x) = step(x, F restricted to J(x)).

    Computed as the attempt for e: the function on the M-descendant set of e
    satisfying the equation everywhere.
    """
    stage = _stages(s, e, fuel)
    if e not in stage:
        raise NotGenerated("recursion needs a generated element")
    attempt: dict = {}
    for x in sorted(stage, key=stage.__getitem__):
        attempt[x] = step(x, {c: attempt[c] for c in s.children(x)})
    return attempt[e]


# -- fam-spections ---------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class FamSpection:
    """A spection with a partial evaluator <W_e, L_e> at each suitable e.

    ``defined(e, h)`` decides h in W_e and ``value(e, h)`` gives L_e(h), where h
    maps each child of e to its value.
    """
    spection: Spection
    defined: Callable[[HfSet, dict], bool]
    value: Callable[[HfSet, dict], Any]


_BOTTOM = object()


def famspec_membership(fs: FamSpection, e: HfSet, fuel: int = DEFAULT_FUEL) -> Any | None:
    """u_e for the large family generated by fs, or None outside its domain.

    The function D -> C_bot is built by recursion over the generated class D
    of the underlying spection; an element whose children are all defined and
    whose tuple of values lies in W_e gets L_e of it, anything else gets bottom.
    """
    s = fs.spection
    stage = _stages(s, e, fuel)
    if e not in stage:
        return None

    def step(x, h):
        if any(v is _BOTTOM for v in h.values()) or not fs.defined(x, h):
            return _BOTTOM
        return fs.value(x, h)

    attempt: dict = {}
    for x in sorted(stage, key=stage.__getitem__):
        attempt[x] = step(x, {c: attempt[c] for c in s.children(x)})
    out = attempt[e]
    return None if out is _BOTTOM else out


def generates_itself(keys: Iterable[HfSet], children: Callable[[HfSet], Iterable[HfSet]]) -> bool:
    """Whether the spection (E, J restricted to E) generates E, on a finite E."""
    E = frozenset(keys)
    s = Spection(lambda x: x in E, children)
    return generate_within(s, E) == E


# -- built-in spections ----------------------------------------------------------

def nat_spection() -> Spection:
    """Zero has no children; Succ x has the single child x."""
    return Spection(
        lambda e: classify(e, "zermelo").tag is not None,
        lambda e: e._raw,
        introspective=True, name="nat",
    )


def term_spection(S: Signature) -> Spection:
    def suitable(e):
        d = decode_term(e)
        if d is None:
            return False
        k = S.arities.get(d[0])
        return k is not None and set(d[1]) == set(k._raw)

    return Spection(suitable, lambda e: decode_term(e)[1].values(), introspective=True,
                    name="term")


def reduced_spection(F) -> Spection:
    def suitable(e):
        c = classify(e, "reduced")
        if c.tag is Tag.Begin:
            return True
        f = untup(c.args[1]) if c.tag is Tag.Make else None
        return f is not None and set(f) == set(F.at(c.args[0])._raw)

    def children(e):
        c = classify(e, "reduced")
        if c.tag is Tag.Begin:
            return ()
        return (c.args[0], *untup(c.args[1]).values())

    return Spection(suitable, children, introspective=True, name="reduced")


def broad_spection(G) -> Spection:
    def suitable(e):
        c = classify(e, "broad")
        if c.tag is Tag.Start:
            return True
        f = untup(c.args[2]) if c.tag is Tag.Build else None
        if f is None:
            return False
        k = G.at(c.args[0]).arities.get(c.args[1])
        return k is not None and set(f) == set(k._raw)

    def children(e):
        c = classify(e, "broad")
        if c.tag is Tag.Start:
            return ()
        return (c.args[0], *untup(c.args[2]).values())

    return Spection(suitable, children, introspective=True, name="broad")


def element_spection() -> Spection:
    """(elset(e)) for every e; generates the well-founded things."""
    return Spection(lambda e: True, lambda e: element_set(e)._raw, introspective=True,
                    name="element")


def ordinal_spection() -> Spection:
    """Transitive sets, with their elements as children; generates Ord."""
    return Spection(is_transitive, lambda e: e._raw, introspective=True, name="ordinal")


def derivation_famspection(r) -> FamSpection:
    """The fam-introspection whose generated large family is the family
    generated by a rubric (triples <i, g, p>) or broad rubric (Basic/Trigger).

    J(Basic(i,g,p)) is the range of g; J(Trigger(m,i,g,p)) adds m.
    """
    from .genengine import BroadRubric

    broad = isinstance(r, BroadRubric)

    def parts(e):
        if broad:
            c = classify(e, "derivation")
            if c.tag is Tag.Basic:
                i, g, p = c.args
                m = None
            elif c.tag is Tag.Trigger:
                m, i, g, p = c.args
            else:
                return None
        else:
            t = unntuple(e, 3)
            if t is None:
                return None
            i, g, p = t
            m = None
        f = untup(g)
        return None if f is None else (m, i, f, p)

    def children(e):
        m, _, f, _ = parts(e)
        kids = list(f.values())
        return kids if m is None else [m, *kids]

    def lookup(e, h):
        m, i, f, p = parts(e)
        if m is None:
            rb = r.basic if broad else r
        else:
            rb = r.triggered(h[m])
        rule = rb.rules.get(i)
        if rule is None or set(f) != set(rule.arity._raw):
            return None
        fam = rb.fire(i, {k: h[d] for k, d in f.items()})
        return (fam[p],) if p in fam else None

    return FamSpection(
        Spection(lambda e: parts(e) is not None, children, introspective=True,
                 name="derivation"),
        lambda e, h: lookup(e, h) is not None,
        lambda e, h: lookup(e, h)[0],
    )
