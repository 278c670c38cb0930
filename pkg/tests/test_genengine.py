import random

import pytest
from hypothesis import given, settings, strategies as st

from broadgen.encodings import basic, ntuple, pair, trigger, tup, von_neumann as n
from broadgen.errors import (
    BudgetExceeded, DomainMismatch, IndexRejected, MalformedDerivation, NonFinitaryError,
    UnknownRule,
)
from broadgen.genengine import (
    EMPTY_RUBRIC, BroadRubric, Budget, Indexed, Rubric, Rule, bracket_broadsig,
    cover_lift_rule, derivation_depth, eval_derivation, eval_derivation_broad, family_via_terms,
    gamma_step, generate_family, generate_set, hat_rubric, is_inductive, listed, single,
)
from broadgen.broadnum import generate_broad
from broadgen.hfset import EMPTY, intern
from broadgen.oracle import family_minimality_check, naive_generate
from broadgen.samples import arith_broad_rubric, arith_rubric, nat_set

from support import V4, _const, _unary, rubric_zoo, small_broadsigs

D50 = ntuple(n(1), EMPTY, n(50))
D51 = ntuple(n(1), EMPTY, n(51))


def test_gamma_examples():
    only_unary = Rubric.of([_unary(lambda x: [x])])
    assert gamma_step(only_unary, []) == set()
    a = n(4)
    assert gamma_step(Rubric.of([_const(a)]), []) == {a}


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32))
def test_gamma_is_monotone(seed):
    rng = random.Random(seed)
    r = Rubric.of([_const(n(1)), _unary(lambda x: [intern([x])]),
                   Rule(n(2), lambda a: single(intern([a[n(0)], a[n(1)]])))])
    Y = set(rng.sample(V4, 6))
    X = set(rng.sample(sorted(Y, key=lambda s: s.key), 3))
    assert gamma_step(r, X) <= gamma_step(r, Y)


def test_idempotent_rule_stabilizes():
    a = n(3)
    g = generate_set(Rubric.of([_const(a), _unary(lambda x: [x])]))
    assert g.elements == {a} and g.stabilized


def test_truncated_arith_rubric():
    r = arith_rubric(window=2, ceiling=500)
    g = generate_set(r)
    assert g.stabilized
    assert sorted(len(x) for x in g.elements) == [100, 102, 400, 401, 402, 403, 406, 407, 408, 409]
    assert all(len(x) >= 100 for x in g.elements)
    assert is_inductive(r, g.elements)
    for x in g.elements:
        assert not is_inductive(r, g.elements - {x})


def test_inductive_above_hundred():
    r = arith_rubric(window=2, ceiling=500)
    upper = {n(k) for k in range(100, 501)}
    assert is_inductive(r, upper)


def test_eval_derivation_examples():
    R = arith_rubric()
    assert eval_derivation(R, D50) is n(100)
    assert eval_derivation(R, D51) is n(102)
    d402 = ntuple(n(0), tup([D50, D51]), n(200))
    assert eval_derivation(R, d402) is n(402)
    with pytest.raises(IndexRejected):
        eval_derivation(R, ntuple(n(1), EMPTY, n(49)))
    with pytest.raises(UnknownRule):
        eval_derivation(R, ntuple(n(5), EMPTY, n(0)))
    with pytest.raises(DomainMismatch):
        eval_derivation(R, ntuple(n(0), tup([D50]), n(200)))
    with pytest.raises(MalformedDerivation):
        eval_derivation(R, n(3))


def test_eval_broad_examples():
    B = arith_broad_rubric()
    b50, b70, b51 = (basic(n(1), EMPTY, n(p)) for p in (50, 70, 51))
    assert eval_derivation_broad(B, b50) is n(100)
    assert eval_derivation_broad(B, b70) is n(140)
    d = trigger(b50, n(2), tup([b70, b51]), n(5))
    assert eval_derivation_broad(B, d) is n(107)
    assert derivation_depth(d, broad=True) == 2
    with pytest.raises(IndexRejected):
        eval_derivation_broad(B, trigger(b50, n(2), tup([b70, b51]), n(3)))


def test_family_examples():
    a = n(6)
    fam = generate_family(Rubric.of([_const(a)]))
    assert fam.entries == {ntuple(n(0), EMPTY, EMPTY): a}
    fam = generate_family(arith_rubric(window=3, ceiling=500), Budget(depth=2))
    d1 = ntuple(n(0), tup([D50, D51]), n(200))
    d2 = ntuple(n(0), tup([D50, D50]), n(202))
    assert fam.entries[d1] is n(402) and fam.entries[d2] is n(402)
    for d, v in fam.entries.items():
        assert eval_derivation(arith_rubric(), d) is v


def test_family_entries_evaluate_to_their_values():
    for name, r in rubric_zoo():
        fam = generate_family(r, Budget(depth=3, elements=50_000))
        ev = eval_derivation_broad if isinstance(r, BroadRubric) else eval_derivation
        for d, v in fam.entries.items():
            assert ev(r, d) is v, name


def test_family_minimality_for_plain_rubrics():
    for name, r in rubric_zoo():
        if isinstance(r, BroadRubric):
            continue
        try:
            fam = generate_family(r, Budget(depth=6, elements=2000))
        except BudgetExceeded:
            continue
        if fam.stabilized and len(fam) <= 10:
            assert family_minimality_check(r, fam.entries), name


def test_infinite_families_are_rejected():
    with pytest.raises(NonFinitaryError):
        generate_set(arith_rubric())
    fam = Indexed(lambda p: True, lambda p: p)
    assert n(3) in fam and fam[n(3)] is n(3)


def test_family_budget_raises():
    r = Rubric.of([_const(EMPTY), _unary(lambda x: [intern([x])])])
    with pytest.raises(BudgetExceeded):
        generate_family(r, Budget(depth=50, elements=10))
    g = generate_set(r, Budget(depth=50, elements=10))
    assert not g.stabilized and len(g.elements) <= 10


def test_chain_is_monotone_and_matches_oracle():
    for name, r in rubric_zoo():
        g = generate_set(r, Budget(depth=30))
        stages = {}
        for x, s in g.stage.items():
            stages.setdefault(s, set()).add(x)
        chain, acc = [], set()
        for s in sorted(stages):
            acc |= stages[s]
            chain.append(set(acc))
        assert all(a <= b for a, b in zip(chain, chain[1:]))
        assert g.stabilized and naive_generate(r) == set(g.elements), name


def test_hat_rubric():
    for name, r in rubric_zoo():
        if isinstance(r, BroadRubric):
            continue
        h = hat_rubric(r)
        assert len(h.basic) == len(r)
        assert generate_set(h).elements == generate_set(r).elements, name


def test_bracket_broadsig_matches_generate_broad():
    for name, G, d in small_broadsigs():
        assert generate_set(bracket_broadsig(G), Budget(depth=d + 1)).elements == generate_broad(G, d), name


def test_family_via_terms_matches_chain():
    for name, r in rubric_zoo():
        if isinstance(r, BroadRubric):
            continue
        direct = generate_family(r, Budget(depth=3, elements=50_000)).entries
        assert family_via_terms(r, 3) == direct, name


def test_cover_lift_unit_cover():
    rule = Rule(n(2), lambda a: single(pair(a[n(0)], a[n(1)])))
    unit = {n(0): nat_set(0), n(1): nat_set(0)}
    lifted = cover_lift_rule(rule, unit)
    assert len(lifted.arity) == 2
    x, y = n(3), n(4)
    args = {pair(n(0), n(0)): x, pair(n(1), n(0)): y}
    assert lifted.apply(args)[EMPTY] is pair(x, y)


def test_cover_lift_collapses_fibres():
    rule = Rule(n(2), lambda a: single(pair(a[n(0)], a[n(1)])))
    a_, b_, c_ = n(0), n(1), n(2)
    cover = {n(0): intern([a_]), n(1): intern([b_, c_])}
    lifted = cover_lift_rule(rule, cover)
    assert len(lifted.arity) == 3
    x, y = n(5), n(6)
    same = {pair(n(0), a_): x, pair(n(1), b_): y, pair(n(1), c_): y}
    assert lifted.apply(same)[EMPTY] is pair(x, y)
    mixed = {pair(n(0), a_): x, pair(n(1), b_): y, pair(n(1), c_): x}
    assert list(lifted.apply(mixed).items()) == []
    with pytest.raises(ValueError):
        cover_lift_rule(rule, {n(0): intern([a_]), n(1): EMPTY})


def test_trigger_table_then_fallback():
    r7 = Rubric.of([_const(n(9))])
    b = BroadRubric(EMPTY_RUBRIC, {n(7): r7}, fallback=lambda x: Rubric.of([_const(n(1))]))
    assert b.triggered(n(7)) is r7
    assert len(b.triggered(n(3))) == 1
    assert len(BroadRubric(EMPTY_RUBRIC).triggered(n(3))) == 0


def test_listed_family_indices():
    fam = listed([n(4), n(5)])
    assert dict(fam.items()) == {n(0): n(4), n(1): n(5)}


def test_budget_validation():
    with pytest.raises(ValueError):
        Budget(depth=-1)
