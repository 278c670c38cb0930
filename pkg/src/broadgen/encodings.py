"""Tagged constructors on things, with total classifiers.

Conventions: an ordered pair is the Kuratowski pair {{x},{x,y}}; n-tuples and
K-tuples are functions, i.e. sets of pairs <k, x_k>, with von Neumann indices
for n-tuples. Numeric tags are von Neumann numerals.
"""
from __future__ import annotations

import enum
import threading
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import ArityError, NotANumeral
from .hfset import EMPTY, HfSet, intern, singleton, upair

# -- numerals --------------------------------------------------------------------

_VN: list[HfSet] = [EMPTY]
_VN_LOCK = threading.Lock()


def von_neumann(n: int) -> HfSet:
    if n < 0:
        raise ValueError("negative numeral")
    if n >= len(_VN):
        with _VN_LOCK:
            while len(_VN) <= n:
                prev = _VN[-1]
                _VN.append(intern(prev._raw + (prev,)))
    return _VN[n]


def is_numeral(x: HfSet) -> bool:
    n = len(x)
    return x.rank == n and von_neumann(n) is x


def to_nat(x: HfSet) -> int:
    if not isinstance(x, HfSet) or not is_numeral(x):
        raise NotANumeral(f"{x!r} is not a von Neumann numeral")
    return len(x)


def zermelo(n: int) -> HfSet:
    x = EMPTY
    for _ in range(n):
        x = singleton(x)
    return x


# -- pairs and tuples ------------------------------------------------------------

def pair(x: HfSet, y: HfSet) -> HfSet:
    return upair(singleton(x), upair(x, y))


def unpair(p: HfSet) -> tuple[HfSet, HfSet] | None:
    els = p._raw
    if len(els) == 1:
        (s,) = els
        if len(s) == 1:
            (x,) = s._raw
            return x, x
        return None
    if len(els) != 2:
        return None
    a, b = els
    if len(a) == 2 and len(b) == 1:
        a, b = b, a
    if len(a) != 1 or len(b) != 2:
        return None
    (x,) = a._raw
    if x not in b:
        return None
    y = b._raw[0] if b._raw[1] is x else b._raw[1]
    return x, y


def tup(entries: Mapping[HfSet, HfSet] | Sequence[HfSet]) -> HfSet:
    """A K-tuple from a mapping, or an n-tuple from a sequence."""
    if isinstance(entries, Mapping):
        return intern(pair(k, v) for k, v in entries.items())
    return intern(pair(von_neumann(j), v) for j, v in enumerate(entries))


def untup(x: HfSet) -> dict[HfSet, HfSet] | None:
    """Decode a function (set of pairs with distinct first components)."""
    out: dict[HfSet, HfSet] = {}
    for p in x.elements:
        kv = unpair(p)
        if kv is None or kv[0] in out:
            return None
        out[kv[0]] = kv[1]
    return out


def ntuple(*xs: HfSet) -> HfSet:
    return tup(xs)


def unntuple(x: HfSet, n: int | None = None) -> list[HfSet] | None:
    f = untup(x)
    if f is None or (n is not None and len(f) != n):
        return None
    out = []
    for j in range(len(f)):
        v = f.get(von_neumann(j))
        if v is None:
            return None
        out.append(v)
    return out


def domain(f: HfSet) -> HfSet:
    d = untup(f)
    if d is None:
        raise ValueError("not a function")
    return intern(d)


def inl(x: HfSet) -> HfSet:
    return pair(von_neumann(0), x)


def inr(y: HfSet) -> HfSet:
    return pair(von_neumann(1), y)


def dsum(fibers: Mapping[HfSet, HfSet]) -> HfSet:
    """Dependent sum: the set of <k, x> with x in fibers[k]."""
    return intern(pair(k, x) for k, fib in fibers.items() for x in fib._raw)


# -- constructors ----------------------------------------------------------------

class Tag(enum.Enum):
    Zero = ("zermelo", 0, "Zero")
    Succ = ("zermelo", 1, "Succ")
    Begin = ("reduced", 0, "Begin")
    Make = ("reduced", 2, "Make")
    Start = ("broad", 0, "Start")
    Build = ("broad", 3, "Build")
    Basic = ("derivation", 3, "Basic")
    Trigger = ("derivation", 4, "Trigger")
    BasicP = ("pseudo", 3, "BasicP")
    TriggerP = ("pseudo", 4, "TriggerP")
    StartP = ("reduced2", 0, "StartP")
    Bu2 = ("reduced2", 4, "Bu2")
    Inl = ("sum", 1, "Inl")
    Inr = ("sum", 1, "Inr")
    TarskiEmbed = ("tarski", 1, "TarskiEmbed")
    TarskiZero = ("tarski", 0, "TarskiZero")
    TarskiTwo = ("tarski", 0, "TarskiTwo")
    TarskiEq = ("tarski", 3, "TarskiEq")
    TarskiSigma = ("tarski", 2, "TarskiSigma")
    TarskiWtype = ("tarski", 2, "TarskiWtype")

    @property
    def group(self) -> str:
        return self.value[0]

    @property
    def arity(self) -> int:
        return self.value[1]


GROUPS = ("zermelo", "reduced", "broad", "derivation", "pseudo", "reduced2", "sum", "tarski")
GROUP_TAGS = {g: tuple(t for t in Tag if t.group == g) for g in GROUPS}

_TARSKI = {
    Tag.TarskiEmbed: 0, Tag.TarskiZero: 1, Tag.TarskiTwo: 2,
    Tag.TarskiEq: 3, Tag.TarskiSigma: 4, Tag.TarskiWtype: 5,
}
_TARSKI_BY_NUM = {n: t for t, n in _TARSKI.items()}


@dataclass(frozen=True)
class DecodedThing:
    tag: Tag | None  # None means opaque within the group
    args: tuple = ()

    @property
    def opaque(self) -> bool:
        return self.tag is None


OPAQUE = DecodedThing(None)


def make(x: HfSet, y: HfSet) -> HfSet:
    return pair(x, y)


def build(x: HfSet, i: HfSet, z: HfSet) -> HfSet:
    return pair(x, pair(i, z))


def basic(i: HfSet, g: HfSet, p: HfSet) -> HfSet:
    return pair(von_neumann(0), ntuple(i, g, p))


def trigger(m: HfSet, i: HfSet, g: HfSet, p: HfSet) -> HfSet:
    return pair(von_neumann(1), ntuple(m, i, g, p))


START = EMPTY
BEGIN = EMPTY
STAR = EMPTY  # the element of 1
NIL = EMPTY  # the empty tuple []
START_P = make(BEGIN, NIL)


def basic_p(x: HfSet, y: HfSet, z: HfSet) -> HfSet:
    return build(build(START, x, y), z, NIL)


def trigger_p(x: HfSet, y: HfSet, z: HfSet, w: HfSet) -> HfSet:
    return build(build(build(x, STAR, NIL), y, z), w, NIL)


def bu2(w: HfSet, sig: HfSet, i: HfSet, a: HfSet) -> HfSet:
    """Reduced encoding of a Build step; sig is the signature as a function."""
    arities = untup(sig)
    if arities is None or i not in arities:
        raise ArityError("Bu2 needs a signature containing the chosen symbol")
    args = untup(a)
    if args is None or set(args) != set(arities[i]._raw):
        raise ArityError("Bu2 tuple domain differs from the symbol's arity")
    b: dict[HfSet, HfSet] = {}
    for j, kj in arities.items():
        b[inl(j)] = BEGIN if j is i else START_P
        for k in kj._raw:
            b[inr(pair(j, k))] = args[k] if j is i else BEGIN
    return make(make(w, NIL), tup(b))


def encode(tag: Tag, args: Sequence[HfSet]) -> HfSet:
    args = tuple(args)
    if len(args) != tag.arity:
        raise ArityError(f"{tag.name} takes {tag.arity} arguments, got {len(args)}")
    if tag in (Tag.Zero, Tag.Begin, Tag.Start):
        return EMPTY
    if tag is Tag.Succ:
        return singleton(args[0])
    if tag is Tag.Make:
        return make(*args)
    if tag is Tag.Build:
        return build(*args)
    if tag is Tag.Basic:
        return basic(*args)
    if tag is Tag.Trigger:
        return trigger(*args)
    if tag is Tag.BasicP:
        return basic_p(*args)
    if tag is Tag.TriggerP:
        return trigger_p(*args)
    if tag is Tag.StartP:
        return START_P
    if tag is Tag.Bu2:
        return bu2(*args)
    if tag is Tag.Inl:
        return inl(args[0])
    if tag is Tag.Inr:
        return inr(args[0])
    return pair(von_neumann(_TARSKI[tag]), ntuple(*args))


def _classify_bu2(x: HfSet) -> DecodedThing:
    outer = unpair(x)
    if outer is None:
        return OPAQUE
    u, bt = outer
    if u is BEGIN:
        return DecodedThing(Tag.StartP) if bt is NIL else OPAQUE
    inner = unpair(u)
    if inner is None or inner[1] is not NIL:
        return OPAQUE
    w = inner[0]
    b = untup(bt)
    if not b:
        return OPAQUE
    zero, one = von_neumann(0), von_neumann(1)
    symbols: list[HfSet] = []
    positions: dict[HfSet, dict[HfSet, HfSet]] = {}
    for j, v in b.items():
        tv = unpair(j)
        if tv is None:
            return OPAQUE
        tag, body = tv
        if tag is zero:
            symbols.append(body)
            positions.setdefault(body, {})
        elif tag is one:
            ik = unpair(body)
            if ik is None:
                return OPAQUE
            positions.setdefault(ik[0], {})[ik[1]] = v
        else:
            return OPAQUE
    if set(positions) != set(symbols):
        return OPAQUE
    chosen = [s for s in symbols if b[inl(s)] is BEGIN]
    if len(chosen) != 1 or any(b[inl(s)] is not START_P for s in symbols if s is not chosen[0]):
        return OPAQUE
    i = chosen[0]
    for s, fib in positions.items():
        if s is not i and any(v is not BEGIN for v in fib.values()):
            return OPAQUE
    sig = tup({s: intern(positions[s]) for s in symbols})
    return DecodedThing(Tag.Bu2, (w, sig, i, tup(positions[i])))


def classify(x: HfSet, group: str) -> DecodedThing:
    """Decode x within one constructor group; never raises."""
    if group == "zermelo":
        if x is EMPTY:
            return DecodedThing(Tag.Zero)
        return DecodedThing(Tag.Succ, x._raw) if len(x) == 1 else OPAQUE
    if group == "reduced":
        if x is EMPTY:
            return DecodedThing(Tag.Begin)
        p = unpair(x)
        return OPAQUE if p is None else DecodedThing(Tag.Make, p)
    if group == "broad":
        if x is EMPTY:
            return DecodedThing(Tag.Start)
        p = unpair(x)
        q = None if p is None else unpair(p[1])
        return OPAQUE if q is None else DecodedThing(Tag.Build, (p[0], q[0], q[1]))
    if group == "derivation":
        p = unpair(x)
        if p is None:
            return OPAQUE
        if p[0] is von_neumann(0):
            t = unntuple(p[1], 3)
            return OPAQUE if t is None else DecodedThing(Tag.Basic, tuple(t))
        if p[0] is von_neumann(1):
            t = unntuple(p[1], 4)
            return OPAQUE if t is None else DecodedThing(Tag.Trigger, tuple(t))
        return OPAQUE
    if group == "pseudo":
        outer = classify(x, "broad")
        if outer.tag is not Tag.Build or outer.args[2] is not NIL:
            return OPAQUE
        u, w = outer.args[0], outer.args[1]
        mid = classify(u, "broad")
        if mid.tag is not Tag.Build:
            return OPAQUE
        v, a, b = mid.args
        if v is START:
            return DecodedThing(Tag.BasicP, (a, b, w))
        inner = classify(v, "broad")
        if inner.tag is Tag.Build and inner.args[1] is STAR and inner.args[2] is NIL:
            return DecodedThing(Tag.TriggerP, (inner.args[0], a, b, w))
        return OPAQUE
    if group == "reduced2":
        return _classify_bu2(x)
    if group == "sum":
        p = unpair(x)
        if p is None:
            return OPAQUE
        if p[0] is von_neumann(0):
            return DecodedThing(Tag.Inl, (p[1],))
        if p[0] is von_neumann(1):
            return DecodedThing(Tag.Inr, (p[1],))
        return OPAQUE
    if group == "tarski":
        p = unpair(x)
        if p is None or not is_numeral(p[0]):
            return OPAQUE
        tag = _TARSKI_BY_NUM.get(len(p[0]))
        if tag is None:
            return OPAQUE
        t = unntuple(p[1], tag.arity)
        return OPAQUE if t is None else DecodedThing(tag, tuple(t))
    raise ValueError(f"unknown constructor group {group!r}")


def group_atom(group: str) -> HfSet | None:
    """The distinguished base value of a group, if it has one."""
    return {"zermelo": EMPTY, "reduced": BEGIN, "broad": START, "pseudo": START,
            "reduced2": BEGIN}.get(group)


def signature_set(arities: Mapping[HfSet, HfSet]) -> HfSet:
    """A signature (family of arity sets) as a function."""
    return tup(dict(arities))


def iter_pairs(xs: Iterable[HfSet]):
    for x in xs:
        p = unpair(x)
        if p is not None:
            yield p


def show(x) -> str:
    """Short human-readable rendering: numerals as decimals, else braces."""
    if not isinstance(x, HfSet):
        return str(x)
    if is_numeral(x):
        return str(len(x))
    from .hfset import serialize
    from .errors import BudgetExceeded
    try:
        return serialize(x, max_chars=400)
    except BudgetExceeded:
        return f"#{x.id}"
