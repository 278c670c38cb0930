import random

import pytest
from hypothesis import given, settings, strategies as st

from broadgen.errors import BudgetExceeded, HfParseError
from broadgen.hfset import (
    EMPTY, HfSet, STORE, canonical_lt, descendant_set, difference, element_set, hf, intern,
    intersection, is_subset, is_transitive, parse, powerset, rank, replace, separate,
    serialize, set_node_budget, singleton, union, union_of, upair,
)
from broadgen.encodings import pair, von_neumann, zermelo
from broadgen.ordinal import v_stage

from support import rand_set


def _frozen(x: HfSet) -> frozenset:
    return frozenset(_frozen(y) for y in x._raw)


hf_sets = st.recursive(st.just(EMPTY), lambda kids: st.lists(kids, max_size=3).map(intern),
                       max_leaves=12)


def test_intern_examples():
    assert serialize(intern([])) == "{}"
    assert serialize(intern([EMPTY, EMPTY])) == "{{}}"
    assert intern([intern([EMPTY]), EMPTY]) is von_neumann(2)


def test_union_powerset_examples():
    one = singleton(EMPTY)
    assert union_of(hf(one, singleton(one))) is hf(EMPTY, one)
    assert powerset(one) is hf(EMPTY, one)
    assert len(powerset(powerset(powerset(EMPTY)))) == 4


def test_separate_replace_and_boolean_ops():
    three = von_neumann(3)
    assert separate(three, lambda x: len(x) % 2 == 0) is hf(von_neumann(0), von_neumann(2))
    assert replace(three, singleton) is hf(*(singleton(x) for x in three))
    assert union(von_neumann(1), von_neumann(3)) is three
    assert intersection(von_neumann(2), von_neumann(3)) is von_neumann(2)
    assert difference(three, von_neumann(2)) is singleton(von_neumann(2))
    assert upair(EMPTY, EMPTY) is singleton(EMPTY)


def test_descendant_set_examples():
    assert descendant_set(EMPTY) is singleton(EMPTY)
    x = singleton(singleton(EMPTY))
    assert descendant_set(x) is hf(x, singleton(EMPTY), EMPTY)


def test_rank_examples():
    assert rank(EMPTY) == 0
    assert rank(von_neumann(2)) == 2
    for n in range(1, 5):
        assert all(rank(x) < n for x in v_stage(n))


def test_serialize_parse_examples():
    assert serialize(von_neumann(2)) == "{{},{{}}}"
    assert parse("{{{}},{}}") is parse("{{},{{}}}")
    assert serialize(pair(EMPTY, singleton(EMPTY))) == "{{{}},{{},{{}}}}"


def test_parse_errors_carry_position():
    with pytest.raises(HfParseError) as info:
        parse("{{},")
    assert info.value.pos >= 3
    with pytest.raises(HfParseError):
        parse("{} {}")


def test_extensionality_random():
    rng = random.Random(1)
    made = [rand_set(rng, 5) for _ in range(10_000)]
    seen: dict = {}
    for x in made:
        key = _frozen(x)
        if key in seen:
            assert seen[key] is x
        seen[key] = x
    ids = {}
    for key, x in seen.items():
        assert ids.setdefault(x.id, key) == key


@settings(max_examples=200, deadline=None)
@given(hf_sets)
def test_roundtrip_serialize(x):
    assert parse(serialize(x)) is x


@settings(max_examples=200, deadline=None)
@given(hf_sets)
def test_descendant_set_is_least_transitive(x):
    d = descendant_set(x)
    assert x in d and is_transitive(d)
    # brute-force closure: every transitive superset of {x} contains d
    closure = {x}
    frontier = [x]
    while frontier:
        y = frontier.pop()
        for z in y._raw:
            if z not in closure:
                closure.add(z)
                frontier.append(z)
    assert set(d._raw) == closure


@settings(max_examples=200, deadline=None)
@given(hf_sets)
def test_rank_is_one_plus_max(x):
    assert rank(x) == (1 + max(rank(y) for y in x._raw) if len(x) else 0)
    assert all(rank(y) < rank(x) for y in x._raw)


@settings(max_examples=100, deadline=None)
@given(hf_sets, hf_sets)
def test_canonical_order_is_total(a, b):
    if a is b:
        assert not canonical_lt(a, b)
    else:
        assert canonical_lt(a, b) != canonical_lt(b, a)


def test_element_set_is_identity_and_subset():
    x = von_neumann(4)
    assert element_set(x) is x
    assert is_subset(von_neumann(2), x) and not is_subset(x, von_neumann(2))


def test_node_budget_is_an_error():
    before = STORE.max_nodes
    try:
        set_node_budget(len(STORE))
        with pytest.raises(BudgetExceeded):
            zermelo(50_000)
    finally:
        set_node_budget(before)


def test_serialize_budget():
    with pytest.raises(BudgetExceeded):
        serialize(von_neumann(30), max_chars=100)


def test_powerset_cap():
    with pytest.raises(BudgetExceeded):
        powerset(von_neumann(25))
