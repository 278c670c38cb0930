import random

import pytest
from hypothesis import given, settings, strategies as st

from broadgen.encodings import (
    BEGIN, GROUP_TAGS, GROUPS, NIL, START, START_P, STAR, Tag, basic_p, build, bu2,
    classify, domain, dsum, encode, group_atom, inl, inr, make, ntuple, pair,
    to_nat, trigger_p, tup, unntuple, unpair, untup, von_neumann as n, zermelo,
)
from broadgen.errors import ArityError, NotANumeral
from broadgen.hfset import EMPTY, hf, singleton

from support import rand_set, random_args


def test_numerals():
    assert n(0) is EMPTY
    assert n(3) is hf(EMPTY, singleton(EMPTY), hf(EMPTY, singleton(EMPTY)))
    assert to_nat(n(100)) == 100
    assert zermelo(2) is singleton(singleton(EMPTY))
    with pytest.raises(NotANumeral):
        to_nat(zermelo(2))


def test_encode_examples():
    assert encode(Tag.Succ, [encode(Tag.Succ, [EMPTY])]) is zermelo(2)
    assert encode(Tag.Make, [EMPTY, EMPTY]) is singleton(singleton(EMPTY))
    i, z = n(5), n(2)
    expected = hf(singleton(EMPTY), hf(EMPTY, hf(singleton(i), hf(i, z))))
    assert encode(Tag.Build, [EMPTY, i, z]) is expected


def test_classify_groups_are_independent():
    x = singleton(singleton(EMPTY))
    assert classify(x, "zermelo").tag is Tag.Succ
    assert classify(x, "zermelo").args == (singleton(EMPTY),)
    assert classify(x, "reduced").tag is Tag.Make
    assert classify(x, "reduced").args == (EMPTY, EMPTY)
    assert classify(EMPTY, "broad").tag is Tag.Start
    m, i, g, p = n(1), n(2), tup([n(3)]), n(4)
    c = classify(encode(Tag.Trigger, [m, i, g, p]), "derivation")
    assert c.tag is Tag.Trigger and c.args == (m, i, g, p)


def test_tuples_and_pairs():
    assert unpair(pair(n(1), n(2))) == (n(1), n(2))
    assert unpair(n(3)) is None
    t = tup([n(7), n(8)])
    assert untup(t) == {n(0): n(7), n(1): n(8)}
    assert domain(t) is n(2)
    assert unntuple(ntuple(n(1), n(2), n(3)), 3) == [n(1), n(2), n(3)]
    assert untup(NIL) == {}
    assert tup([]) is NIL


def test_sums():
    assert classify(inl(n(2)), "sum").tag is Tag.Inl
    assert classify(inr(n(2)), "sum").tag is Tag.Inr
    assert inl(n(2)) is not inr(n(2))
    s = dsum({n(0): n(2), n(1): EMPTY})
    assert s is hf(pair(n(0), n(0)), pair(n(0), n(1)))


def test_pseudo_constructors_reduce_to_build():
    x, y, z, w = n(1), tup([n(2)]), n(3), n(4)
    assert basic_p(x, y, z) is build(build(START, x, y), z, NIL)
    assert trigger_p(w, x, y, z) is build(build(build(w, STAR, NIL), x, y), z, NIL)
    assert classify(basic_p(x, y, z), "pseudo").args == (x, y, z)
    assert classify(trigger_p(w, x, y, z), "pseudo").args == (w, x, y, z)


def test_start_prime():
    assert START_P is make(BEGIN, NIL)
    assert START_P is singleton(singleton(EMPTY))
    assert classify(START_P, "reduced2").tag is Tag.StartP


def test_bu2_preconditions():
    sig = tup({n(4): n(2), n(5): n(0)})
    with pytest.raises(ArityError):
        bu2(START_P, sig, n(9), NIL)
    with pytest.raises(ArityError):
        bu2(START_P, sig, n(4), tup([START_P]))
    x = bu2(START_P, sig, n(4), tup([START_P, START_P]))
    assert classify(x, "reduced2").args == (START_P, sig, n(4), tup([START_P, START_P]))


def test_arity_checked():
    with pytest.raises(ArityError):
        encode(Tag.Build, [EMPTY])


@settings(max_examples=300, deadline=None)
@given(st.sampled_from(list(Tag)), st.integers(0, 2**32))
def test_classify_encode_roundtrip(tag, seed):
    args = random_args(tag, random.Random(seed))
    c = classify(encode(tag, args), tag.group)
    assert c.tag is tag and list(c.args) == args


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 2**32), st.sampled_from(GROUPS))
def test_classify_never_raises_on_opaque_sets(seed, group):
    x = rand_set(random.Random(seed), 5)
    c = classify(x, group)
    if c.tag is not None:
        assert encode(c.tag, c.args) is x


def test_atoms_outside_constructor_ranges():
    rng = random.Random(3)
    for group in GROUPS:
        atom = group_atom(group)
        if atom is None:
            continue
        for tag in GROUP_TAGS[group]:
            if tag.arity == 0:
                continue
            for _ in range(200):
                assert encode(tag, random_args(tag, rng)) is not atom
