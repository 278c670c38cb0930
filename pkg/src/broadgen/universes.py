"""The least Tarski-style universe extending a finite family of finite sets,
enumerated to a bounded constructor depth.

The universe is read off the family generated by a broad rubric whose values
are the decoded sets themselves: the basic rubric offers the base sets, the
empty set and {0, 1}; a set D triggers equality codes for pairs in D, and
sigma and wtype rules of arity D. The map theta turns each derivation into its
code. W-types are usually infinite, so they are kept as handles; a handle
triggers nothing here, and every such skipped trigger is recorded.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence

from .encodings import (
    Tag, classify, dsum, encode, inl, inr, pair, tup, unpair, untup, von_neumann,
)
from .errors import MalformedDerivation
from .genengine import (
    EMPTY_RUBRIC, BroadRubric, Budget, Rubric, Rule, generate_family, single,
)
from .hfset import EMPTY, HfSet, intern, serialize, truth
from .terms import Signature, generate_terms, term


# -- infinite decodes --------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class WType:
    """The terms of the signature (E_k) for k in the index set."""
    arities: Mapping[HfSet, Any]  # HfSet or another handle

    def describe(self) -> dict:
        return {"kind": "wtype",
                "arities": {serialize(k): _describe(v) for k, v in _sorted(self.arities)}}

    def enumerate(self, depth: int) -> frozenset:
        """Terms of height <= depth (infinite arities are skipped)."""
        finite = {k: v for k, v in self.arities.items() if isinstance(v, HfSet)}
        return frozenset(generate_terms(Signature(finite), depth))


@dataclass(frozen=True, eq=False)
class Sum:
    """A dependent sum with at least one infinite component."""
    fibres: Mapping[HfSet, Any]

    def describe(self) -> dict:
        return {"kind": "sigma",
                "fibres": {serialize(k): _describe(v) for k, v in _sorted(self.fibres)}}

    def enumerate(self, depth: int) -> frozenset:
        out = set()
        for k, v in self.fibres.items():
            part = v._raw if isinstance(v, HfSet) else v.enumerate(depth)
            out.update(pair(k, e) for e in part)
        return frozenset(out)


def _sorted(m: Mapping) -> list:
    return sorted(m.items(), key=lambda kv: kv[0].key)


def _describe(v) -> Any:
    return serialize(v) if isinstance(v, HfSet) else v.describe()


def wtype_decode(arities: Mapping[HfSet, Any]):
    """Terms of a signature: empty without a nullary symbol, the finite set of
    constants if every symbol is nullary, and infinite otherwise."""
    nullary = [k for k, v in arities.items() if isinstance(v, HfSet) and len(v) == 0]
    if not nullary:
        return EMPTY
    if len(nullary) == len(arities):
        return intern(term(k, {}) for k in nullary)
    return WType(dict(arities))


def sigma_decode(fibres: Mapping[HfSet, Any]):
    if all(isinstance(v, HfSet) for v in fibres.values()):
        return dsum(dict(fibres))
    return Sum(dict(fibres))


# -- the broad rubric ---------------------------------------------------------------

TWO_SET = intern([von_neumann(0), von_neumann(1)])
ZERO_RULE = inr(von_neumann(0))
TWO_RULE = inr(von_neumann(1))
SIGMA_RULE = inr(von_neumann(0))
WTYPE_RULE = inr(von_neumann(1))


def _const(v) -> Rule:
    return Rule(EMPTY, lambda a: single(v))


def tarski_rubric(base: Mapping[HfSet, HfSet], skipped: list | None = None) -> BroadRubric:
    """Basic rules inl a (giving B_a), inr 0 (giving the empty set) and inr 1
    (giving {0,1}), all nullary. A finite set D triggers nullary rules
    inl <d,e> giving the truth value of d = e, and rules inr 0 and inr 1 of
    arity D giving the sum and the W-type of the argument family."""
    rules = {inl(a): _const(b) for a, b in base.items()}
    rules[ZERO_RULE] = _const(EMPTY)
    rules[TWO_RULE] = _const(TWO_SET)
    basic = Rubric(rules)

    def trig(D) -> Rubric:
        if not isinstance(D, HfSet):
            if skipped is not None:
                skipped.append(D)
            return EMPTY_RUBRIC
        out = {inl(pair(d, e)): _const(truth(d is e)) for d in D._raw for e in D._raw}
        out[SIGMA_RULE] = Rule(D, lambda a: single(sigma_decode(a)), name="sigma")
        out[WTYPE_RULE] = Rule(D, lambda a: single(wtype_decode(a)), name="wtype")
        return Rubric(out)

    return BroadRubric(basic, fallback=trig)


# -- theta ---------------------------------------------------------------------------

def theta(d: HfSet, _memo: dict | None = None) -> HfSet:
    """Code of a derivation in the generated family."""
    memo = {} if _memo is None else _memo
    hit = memo.get(d)
    if hit is not None:
        return hit
    c = classify(d, "derivation")
    if c.tag is Tag.Basic:
        i, g, p = c.args
        s = classify(i, "sum")
        if s.tag is Tag.Inl:
            out = encode(Tag.TarskiEmbed, [s.args[0]])
        elif i is ZERO_RULE:
            out = encode(Tag.TarskiZero, [])
        elif i is TWO_RULE:
            out = encode(Tag.TarskiTwo, [])
        else:
            raise MalformedDerivation("unknown basic rule")
    elif c.tag is Tag.Trigger:
        n, i, g, p = c.args
        m = theta(n, memo)
        s = classify(i, "sum")
        if s.tag is Tag.Inl:
            out = encode(Tag.TarskiEq, [m, *unpair(s.args[0])])
        else:
            mapped = tup({k: theta(e, memo) for k, e in untup(g).items()})
            tag = Tag.TarskiSigma if i is SIGMA_RULE else Tag.TarskiWtype
            out = encode(tag, [m, mapped])
    else:
        raise MalformedDerivation("not a derivation")
    memo[d] = out
    return out


@dataclass
class TarskiUniverse:
    codes: dict  # code -> decode (HfSet, WType or Sum)
    derivations: dict  # code -> derivation
    stage: dict  # code -> constructor depth
    stabilized: bool
    truncated: list = field(default_factory=list)  # codes whose triggers were skipped
    base: Mapping[HfSet, HfSet] = field(default_factory=dict)

    def decode(self, code: HfSet):
        return self.codes[code]

    def __len__(self) -> int:
        return len(self.codes)

    def to_json(self) -> dict:
        rows = []
        for code in sorted(self.codes, key=lambda c: (self.stage[c], show_code(c))):
            rows.append({"code": show_code(code), "depth": self.stage[code],
                         "decode": _describe(self.codes[code])})
        return {"codes": rows, "stabilized": self.stabilized,
                "truncated": sorted(show_code(c) for c in self.truncated)}


def tarski_universe(base: Mapping[HfSet, HfSet] | Sequence[HfSet] = (),
                    budget: Budget = Budget(depth=2)) -> TarskiUniverse:
    """All codes of constructor depth <= budget.depth with their decodes."""
    if not isinstance(base, Mapping):
        base = {von_neumann(j): b for j, b in enumerate(base)}
    skipped: list = []
    fam = generate_family(tarski_rubric(base, skipped), budget)
    memo: dict = {}
    codes, derivs, stage = {}, {}, {}
    for d, v in fam.entries.items():
        c = theta(d, memo)
        if c in codes:
            raise MalformedDerivation("theta is not injective")  # cannot happen
        codes[c], derivs[c], stage[c] = v, d, fam.stage[d]
    truncated = [c for c, v in codes.items() if any(v is h for h in skipped)]
    return TarskiUniverse(codes, derivs, stage, fam.stabilized, truncated, dict(base))


def redecode(u: TarskiUniverse, code: HfSet):
    """Decode a code from the stored decodes of its parts."""
    c = classify(code, "tarski")
    if c.tag is Tag.TarskiEmbed:
        return u.base[c.args[0]]
    if c.tag is Tag.TarskiZero:
        return EMPTY
    if c.tag is Tag.TarskiTwo:
        return TWO_SET
    if c.tag is Tag.TarskiEq:
        m, a, b = c.args
        dm = u.codes[m]
        if a not in dm or b not in dm:
            raise MalformedDerivation("eq code with arguments outside the decode")
        return truth(a is b)
    if c.tag in (Tag.TarskiSigma, Tag.TarskiWtype):
        m, g = c.args
        fib = {k: u.codes[v] for k, v in untup(g).items()}
        if set(fib) != set(u.codes[m]._raw):
            raise MalformedDerivation("family not indexed by the decode")
        return sigma_decode(fib) if c.tag is Tag.TarskiSigma else wtype_decode(fib)
    raise MalformedDerivation("not a Tarski code")


_NAMES = {Tag.TarskiZero: "zero", Tag.TarskiTwo: "two"}


def show_code(code: HfSet) -> str:
    """Structural form such as sigma(two,[0->zero,1->two])."""
    from .encodings import show
    c = classify(code, "tarski")
    if c.tag in _NAMES:
        return _NAMES[c.tag]
    if c.tag is Tag.TarskiEmbed:
        return f"embed({show(c.args[0])})"
    if c.tag is Tag.TarskiEq:
        m, a, b = c.args
        return f"eq({show_code(m)},{show(a)},{show(b)})"
    if c.tag in (Tag.TarskiSigma, Tag.TarskiWtype):
        m, g = c.args
        name = "sigma" if c.tag is Tag.TarskiSigma else "wtype"
        items = sorted(untup(g).items(), key=lambda kv: kv[0].key)
        inner = ",".join(f"{show(k)}->{show_code(v)}" for k, v in items)
        return f"{name}({show_code(m)},[{inner}])"
    return show(code)
