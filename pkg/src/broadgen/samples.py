"""Worked examples used by the tests, the CLI and the README.

All symbols, positions and values are naturals (von Neumann numerals).
"""
from __future__ import annotations

from .broadnum import BroadSignature, ReducedBroadSignature
from .encodings import START, build, make, tup, von_neumann as n
from .genengine import BroadRubric, Rubric, numeric_rule
from .hfset import EMPTY, intern
from .terms import Signature, term


def nat_set(*xs: int):
    return intern(n(x) for x in xs)


def tree_signature() -> Signature:
    """Symbols 5, 6, 7, 8 with arities {0,1,2,3}, {}, {}, {0,1,2}."""
    return Signature.of({5: 4, 6: 0, 7: 0, 8: 3})


def tree_term():
    """8[0->5[0->7, 1->6, 2->7, 3->7], 1->7, 2->6]."""
    six, seven = term(n(6)), term(n(7))
    return term(n(8), [term(n(5), [seven, six, seven, seven]), seven, six])


def tree_terms_listed() -> list:
    six, seven = term(n(6)), term(n(7))
    return [
        six,
        seven,
        term(n(5), [seven, six, seven, seven]),
        tree_term(),
    ]


def arith_rubric(window: int | None = None, ceiling: int | None = None) -> Rubric:
    """Rule 0: [m0, m1] -> (m0+m1+p) for p >= 2*m0; rule 1: [] -> (2p) for p >= 50.

    With ``window`` each family keeps only its first ``window`` indices, and
    values above ``ceiling`` are dropped.
    """
    return Rubric.of([
        numeric_rule(2, lambda m: 2 * m[0], lambda m, p: m[0] + m[1] + p, window, ceiling),
        numeric_rule(0, lambda m: 50, lambda m, p: 2 * p, window, ceiling),
    ])


def arith_triggers(window: int | None = None, ceiling: int | None = None) -> dict:
    seven = Rubric.of([
        numeric_rule(2, lambda m: 9, lambda m, p: m[0] + m[1] + 500 * p, window, ceiling),
    ])
    hundred = Rubric.of([
        numeric_rule(3, lambda m: 17, lambda m, p: m[0] + m[1] * m[2] + p, window, ceiling),
        numeric_rule(0, lambda m: 1000, lambda m, p: p, window, ceiling),
        numeric_rule(2, lambda m: 4, lambda m, p: m[1] + p, window, ceiling),
    ])
    return {n(7): seven, n(100): hundred}


def arith_broad_rubric(window: int | None = None, ceiling: int | None = None) -> BroadRubric:
    """Basic rubric as in arith_rubric; 7 and 100 trigger extra rubrics."""
    return BroadRubric(arith_rubric(window, ceiling), arith_triggers(window, ceiling))


def sample_broad_signature() -> BroadSignature:
    """Build(Start,6,[]) gets symbols 7, 8 of arity {0,1} and 9 of arity {};
    everything else gets 4 of arity {0,1} and 5, 6 of arity {}."""
    special = Signature.of({7: 2, 8: 2, 9: 0})
    usual = Signature.of({4: 2, 5: 0, 6: 0})
    return BroadSignature({build(START, n(6), EMPTY): special}, default=usual)


def sample_broad_numbers() -> list:
    s5 = build(START, n(5), EMPTY)
    s6 = build(START, n(6), EMPTY)
    eight = build(s6, n(8), tup([START, s5]))
    return [START, s5, s6, eight, build(eight, n(6), EMPTY)]


def sample_reduced_signature() -> ReducedBroadSignature:
    """Make(Begin, []) has arity {0,1}; everything else arity {}."""
    return ReducedBroadSignature({make(EMPTY, EMPTY): nat_set(0, 1)})


def sample_reduced_numbers() -> list:
    b1 = make(EMPTY, EMPTY)
    b2 = make(b1, tup([EMPTY, b1]))
    return [EMPTY, b1, b2, make(b2, EMPTY)]
