import random

import pytest

from broadgen.broadnum import broad_rank, generate_broad, generate_reduced
from broadgen.encodings import NIL, ntuple, von_neumann as n, zermelo
from broadgen.errors import BudgetExceeded, NotGenerated
from broadgen.genengine import Budget, generate_family
from broadgen.hfset import EMPTY, descendant_set, intern, is_subset
from broadgen.ordinal import OrdCNF, ssup
from broadgen.samples import arith_rubric, sample_broad_signature, sample_reduced_signature
from broadgen.spection import (
    Spection, broad_spection, check_introspective, derivation_famspection,
    derivation_signature, derivation_term, element_spection, famspec_membership,
    generate_within, generated_part, generates_itself, is_cogenerated, is_generated,
    m_descendant_set, nat_spection, ordinal_spection, recurse, reduced_spection, term_spection,
)
from broadgen.terms import Signature, generate_terms, is_term

from support import rand_set, rubric_zoo, small_broadsigs

INTROSPECTIONS = [nat_spection, element_spection, ordinal_spection,
                  lambda: term_spection(Signature.of({0: 0, 1: 1, 2: 2}))]


def test_nat_m_descendant_set():
    s = nat_spection()
    z2 = zermelo(2)
    assert m_descendant_set(s, z2) is intern([zermelo(0), zermelo(1), z2])
    assert m_descendant_set(s, n(2)) is intern([n(2)])


def test_nat_generation():
    s = nat_spection()
    assert is_generated(s, zermelo(2))
    assert not is_generated(s, n(2))
    assert not is_cogenerated(s, n(2))


def test_introspections_stay_inside_descendants():
    rng = random.Random(3)
    for make in INTROSPECTIONS:
        s = make()
        for _ in range(200):
            e = rand_set(rng, 4)
            assert check_introspective(s, e)
            assert is_subset(m_descendant_set(s, e), descendant_set(e))


def test_generated_equals_cogenerated_for_introspections():
    rng = random.Random(4)
    for make in INTROSPECTIONS:
        s = make()
        for _ in range(1000):
            e = rand_set(rng, 4)
            assert is_generated(s, e) == is_cogenerated(s, e), s.name


def test_non_converging_spection_runs_out_of_fuel():
    s = Spection(lambda e: True, lambda e: [intern([e])])
    with pytest.raises(BudgetExceeded):
        m_descendant_set(s, EMPTY, fuel=100)


def test_non_introspection_detected():
    s = Spection(lambda e: len(e) < 3, lambda e: [n(min(len(e) + 1, 2))])
    assert not check_introspective(s, EMPTY)
    # the cycle at 2 is cogenerated but never generated
    assert is_cogenerated(s, n(2)) and not is_generated(s, n(2))


def test_derivation_term_and_signature():
    s = nat_spection()
    z1 = zermelo(1)
    t = derivation_term(s, z1)
    S = derivation_signature(s, z1)
    assert is_term(S, t)
    assert set(S.arities) == {zermelo(0), z1}
    assert derivation_term(s, n(2)) is None


def test_recurse_examples():
    s = nat_spection()
    count = lambda x, h: n(1 + sum(len(v) for v in h.values()))
    assert recurse(s, count, zermelo(3)) is n(4)
    assert recurse(s, lambda x, h: n(7), zermelo(3)) is n(7)
    with pytest.raises(NotGenerated):
        recurse(s, count, n(2))


def test_recurse_gives_broad_rank():
    for name, G, d in small_broadsigs():
        s = broad_spection(G)
        step = lambda x, h: ssup(list(h.values())) if h else OrdCNF.of(0)
        for w in generate_broad(G, d):
            assert recurse(s, step, w) == broad_rank(w, G), name


def test_builtin_spections_match_generators():
    rng = random.Random(5)
    junk = [rand_set(rng, 4) for _ in range(200)]

    S = Signature.of({0: 0, 1: 1, 2: 2})
    terms = generate_terms(S, 3)
    assert generate_within(term_spection(S), list(terms) + junk) == terms

    for name, G, d in small_broadsigs() + [("sample", sample_broad_signature(), 2)]:
        frag = generate_broad(G, d)
        assert generate_within(broad_spection(G), list(frag) + junk) == frag, name

    F = sample_reduced_signature()
    frag = generate_reduced(F, 3)
    assert generate_within(reduced_spection(F), list(frag) + junk) == frag

    nats = {zermelo(k) for k in range(6)}
    assert generate_within(nat_spection(), list(nats) + junk) >= nats
    zs = {zermelo(k) for k in range(8)}
    assert all(is_generated(nat_spection(), x) == (x in zs) for x in junk)


def test_generated_part():
    s = nat_spection()
    assert generated_part(s, zermelo(3)) == {zermelo(k) for k in range(4)}


def test_famspec_membership_examples():
    fs = derivation_famspection(arith_rubric())
    assert famspec_membership(fs, ntuple(n(1), NIL, n(50))) is n(100)
    assert famspec_membership(fs, ntuple(n(1), NIL, n(49))) is None
    assert famspec_membership(fs, n(5)) is None


def test_famspec_domain_matches_generated_family():
    rng = random.Random(6)
    for name, r in rubric_zoo():
        fs = derivation_famspection(r)
        fam = generate_family(r, Budget(depth=3, elements=50_000))
        for d, v in fam.entries.items():
            assert famspec_membership(fs, d) is v, name
        kids = fs.spection.children
        assert generates_itself(fam.entries, kids), name
        for _ in range(30):
            x = rand_set(rng, 4)
            if x not in fam.entries and famspec_membership(fs, x) is not None:
                # a derivation of greater depth, never a wrong one
                assert x in generate_family(r, Budget(depth=8, elements=100_000)).entries


def test_generates_itself_rejects_gaps():
    kids = lambda e: e._raw
    assert generates_itself([n(0), n(1), n(2)], kids)
    assert not generates_itself([n(1), n(2)], kids)
