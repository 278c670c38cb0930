"""Shared fixtures for the test suite: random sets, a zoo of finitary rubrics,
small broad signatures and a CLI runner."""
from __future__ import annotations

import io
import json
import random
from importlib import resources

from broadgen import dsl
from broadgen.broadnum import BroadSignature
from broadgen.cli import prelude_text, run
from broadgen.encodings import START, Tag, build, encode, pair, tup, von_neumann as n
from broadgen.genengine import (
    EMPTY_FAMILY, BroadRubric, Rubric, Rule, bracket_broadsig, cover_lift_rubric,
    hat_rubric, listed, numeric_rule, single,
)
from broadgen.hfset import EMPTY, HfSet, intern
from broadgen.ordinal import v_stage
from broadgen.samples import arith_broad_rubric, arith_rubric, nat_set
from broadgen.terms import Signature, term, term_rubric

V4 = list(v_stage(4).elements)


def rand_set(rng: random.Random, rank: int = 4, width: int = 3) -> HfSet:
    """A random set of rank at most ``rank``."""
    if rank <= 0:
        return EMPTY
    return intern(rand_set(rng, rng.randrange(rank), width) for _ in range(rng.randrange(width + 1)))


def rand_small(rng: random.Random) -> HfSet:
    """Mostly members of V_4, sometimes a deeper random set or a numeral."""
    roll = rng.random()
    if roll < 0.6:
        return rng.choice(V4)
    if roll < 0.8:
        return n(rng.randrange(12))
    return rand_set(rng, 4)


# -- rubrics ----------------------------------------------------------------------

def _const(v) -> Rule:
    return Rule(EMPTY, lambda a: single(v))


def _unary(f, name="") -> Rule:
    """Rule of arity 1 whose family is f(x) (a list of values) for input x."""
    return Rule(n(1), lambda a: listed(f(a[n(0)])), name=name)


def _binary(f) -> Rule:
    return Rule(n(2), lambda a: listed(f(a[n(0)], a[n(1)])))


def _nat(x: HfSet):
    from broadgen.encodings import is_numeral
    return len(x) if is_numeral(x) else None


def _mod_unary(mult: int, mod: int):
    return _unary(lambda x: [] if _nat(x) is None else [n((mult * _nat(x)) % mod)])


def _mod_binary(mod: int):
    def f(x, y):
        a, b = _nat(x), _nat(y)
        return [] if a is None or b is None else [n((a + b) % mod)]
    return _binary(f)


def tiny_broadsig_rubric() -> BroadRubric:
    """[G] for G giving Start one constant and everything else nothing."""
    G = BroadSignature({START: Signature.of({5: 0})})
    return bracket_broadsig(G)


def _doc_rubric(name: str) -> Rubric:
    return dsl.Desugarer(dsl.parse_spec(prelude_text() + ZOO_DOC)).rubric(name)


ZOO_DOC = """
rubric T { rule 0 arity {} => (1, <2,3>, {0, {}}); rule 1 arity 1 => family p from 0 to 1 : (m0 - 1)*(2 + p) max 10; }
rubric Tri { rule 0 arity {} => (0); rule 1 arity 1 => family p from 1 to 2 : m0 + p max 6; }
"""


def rubric_zoo() -> list[tuple[str, object]]:
    """Finitary rubrics whose generated sets stabilize with at most 12 elements."""
    a, b = n(3), nat_set(0, 2)
    upto = lambda k: _unary(lambda x: [intern([*x._raw, x])] if _nat(x) is not None and _nat(x) < k else [])
    zoo = [
        ("single-constant", Rubric.of([_const(a)])),
        ("constant-and-identity", Rubric.of([_const(a), _unary(lambda x: [x])])),
        ("arith-window-2", arith_rubric(window=2, ceiling=500)),
        ("arith-window-1", arith_rubric(window=1, ceiling=300)),
        ("zermelo-upto-3", Rubric.of([_const(EMPTY), _unary(lambda x: [intern([x])] if x.rank < 3 else [])])),
        ("vn-successor-upto-5", Rubric.of([_const(EMPTY), upto(5)])),
        ("upair-rank-2", Rubric.of([_const(EMPTY), _binary(lambda x, y: [intern([x, y])] if max(x.rank, y.rank) < 2 else [])])),
        ("dsl-T", _doc_rubric("T")),
        ("dsl-Rsmall", _doc_rubric("Rsmall")),
        ("dsl-Tri", _doc_rubric("Tri")),
        ("listed-constants", Rubric.of([Rule(EMPTY, lambda _: listed([n(0), n(1), n(2)])), upto(4)])),
        ("numeric-window", Rubric.of([_const(n(3)),
                                      numeric_rule(1, lambda m: 1, lambda m, p: m[0] + p, window=2, ceiling=8)])),
        ("doubling-mod-11", Rubric.of([_const(n(1)), _mod_unary(2, 11)])),
        ("sum-mod-7", Rubric.of([_const(n(2)), _const(n(3)), _mod_binary(7)])),
        ("empty-family-rule", Rubric.of([Rule(EMPTY, lambda _: EMPTY_FAMILY), _const(b)])),
        ("domain-restricted", Rubric({n(0): _const(n(0)), n(1): _const(n(7)),
                                      n(2): _unary(lambda x: [n(_nat(x) + 1)])},
                                     domain=lambda x: _nat(x) is not None and _nat(x) < 3)),
        ("terms-one-constant", term_rubric(Signature.of({4: 0}))),
        ("terms-two-constants", term_rubric(Signature.of({4: 0, 9: 0}))),
        ("cover-lift-sum-mod-5", _cover_lifted()),
        ("hat-of-doubling", hat_rubric(Rubric.of([_const(n(1)), _mod_unary(3, 7)]))),
        ("broad-arith-ceiling-104", arith_broad_rubric(window=1, ceiling=104)),
        ("broad-trigger-chain", _trigger_chain()),
        ("bracket-tiny-broadsig", tiny_broadsig_rubric()),
    ]
    return zoo


def _cover_lifted() -> Rubric:
    base = Rubric.of([_const(n(1)), _mod_binary(5)])
    cover = {n(0): nat_set(0), n(1): nat_set(0, 1)}
    lifted = cover_lift_rubric(base, {n(1): [cover]})
    lifted.rules[n(0)] = base.rules[n(0)]
    return lifted


def _trigger_chain() -> BroadRubric:
    """0 is basic; 0 triggers the constant 1; 1 triggers x -> x + 2 below 7."""
    step = _unary(lambda x: [n(_nat(x) + 2)] if _nat(x) is not None and _nat(x) < 5 else [])
    return BroadRubric(Rubric.of([_const(n(0))]),
                       {n(0): Rubric.of([_const(n(1))]), n(1): Rubric.of([step])})


# -- broad signatures -------------------------------------------------------------

def small_broadsigs() -> list[tuple[str, BroadSignature, int]]:
    """(name, G, depth) pairs whose depth fragments are cheap to enumerate."""
    s6 = build(START, n(6), EMPTY)
    return [
        ("chain", BroadSignature(default=Signature.of({0: 0})), 3),
        ("two-constants", BroadSignature(default=Signature.of({0: 0, 1: 0})), 3),
        ("start-unary", BroadSignature({START: Signature.of({0: 1})}, Signature.of({1: 0})), 3),
        ("special-at-6", BroadSignature({s6: Signature.of({7: 2, 9: 0})}, Signature.of({5: 0, 6: 0})), 3),
        ("unary-everywhere", BroadSignature(default=Signature.of({0: 1})), 3),
        ("binary-and-constant", BroadSignature(default=Signature.of({0: 2, 1: 0})), 2),
    ]


# -- CLI --------------------------------------------------------------------------

def schema() -> dict:
    return json.loads(resources.files("broadgen").joinpath("schema.json").read_text())


def cli(*argv: str) -> tuple[int, str, str]:
    out, err = io.StringIO(), io.StringIO()
    status = run(list(argv), out, err)
    return status, out.getvalue(), err.getvalue()


# -- random constructor arguments -------------------------------------------------

def random_args(tag, rng: random.Random) -> list:
    """Arguments for ``tag`` that satisfy its preconditions (Bu2 needs a
    signature containing the symbol and a tuple over its arity)."""
    if tag is Tag.Bu2:
        symbols = rng.sample(range(6), rng.randrange(1, 4))
        arities = {n(s): n(rng.randrange(3)) for s in symbols}
        i = n(rng.choice(symbols))
        args = tup({k: rand_small(rng) for k in arities[i]._raw})
        return [rand_small(rng), tup(arities), i, args]
    return [rand_small(rng) for _ in range(tag.arity)]



# -- Tarski universe ----------------------------------------------------------------

TARSKI_ZERO = encode(Tag.TarskiZero, [])
TARSKI_TWO = encode(Tag.TarskiTwo, [])


def tarski_hand_table() -> dict:
    """Depth-2 codes over the empty base with their decodes, worked out by hand.
    "handle" marks an infinite W-type."""
    zero, two = TARSKI_ZERO, TARSKI_TWO
    zz, zt, tz, tt = tup([zero, zero]), tup([zero, two]), tup([two, zero]), tup([two, two])
    o, i = n(0), n(1)
    true, false = intern([EMPTY]), EMPTY
    return {
        zero: EMPTY,
        two: intern([o, i]),
        encode(Tag.TarskiEq, [two, o, o]): true,
        encode(Tag.TarskiEq, [two, i, i]): true,
        encode(Tag.TarskiEq, [two, o, i]): false,
        encode(Tag.TarskiEq, [two, i, o]): false,
        encode(Tag.TarskiSigma, [zero, tup([])]): EMPTY,
        encode(Tag.TarskiSigma, [two, zz]): EMPTY,
        encode(Tag.TarskiSigma, [two, zt]): intern([pair(i, o), pair(i, i)]),
        encode(Tag.TarskiSigma, [two, tz]): intern([pair(o, o), pair(o, i)]),
        encode(Tag.TarskiSigma, [two, tt]): intern([pair(a, b) for a in (o, i) for b in (o, i)]),
        encode(Tag.TarskiWtype, [zero, tup([])]): EMPTY,
        encode(Tag.TarskiWtype, [two, zz]): intern([term(o, {}), term(i, {})]),
        encode(Tag.TarskiWtype, [two, tt]): EMPTY,
        encode(Tag.TarskiWtype, [two, zt]): "handle",
        encode(Tag.TarskiWtype, [two, tz]): "handle",
    }


# -- acceptance reporting ---------------------------------------------------------

ACCEPTANCE_LINES: list[str] = []


def report(number: int, failures: list, detail: str) -> None:
    """Print and record one PASS/FAIL line, then fail the test on failures."""
    status = "PASS" if not failures else "FAIL"
    line = f"{status} criterion {number:>2}: {detail}"
    if failures:
        line += f" ({len(failures)} failures, first: {failures[0]})"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert not failures, line
