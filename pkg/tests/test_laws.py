from __future__ import annotations

import itertools
import random

import pytest

from oracles import lawful_lens_pairs
from optikit.action import make_action
from optikit.concrete import (Achromatic, Lens, Prism, abstractify, concretize, convert,
                              lens_to_linear)
from optikit.errors import KindMismatch, SignatureMismatch
from optikit.finset import FiniteFunction
from optikit.laws import (action_image, chain_invariant, concrete_laws, get_chain_table, inside,
                          is_lawful, lawful_classes, lawful_closure_checks, lawful_verdict,
                          lawfulness_equivalence, laws_of, once, onthenose_search, outside,
                          prism_third_law_check, twice, _inside_code)
from optikit.optic_core import (OpticSignature, Representative, compose_optics,
                                costate_to_morphism, get_table, identity_optic, iota,
                                morphism_to_costate, reduce_rep)

LENS, PRISM, ISO = make_action("lens"), make_action("prism"), make_action("iso")
SIG2 = OpticSignature(2, 2, 2, 2)


def fn(dom, cod, table):
    return FiniteFunction(dom, cod, table)


# ---------------------------------------------------- outside, once, twice

def test_outside_examples():
    assert outside(LENS, identity_optic(LENS, 2, 2)).table == (0, 1)
    f = fn(2, 2, (1, 1))
    assert outside(LENS, morphism_to_costate(LENS, f)).table == f.table
    with pytest.raises(SignatureMismatch):
        outside(LENS, identity_optic(LENS, 2, 3))


@pytest.mark.parametrize("name", ["lens", "prism", "iso"])
def test_outside_once_twice_constant_on_classes(name):
    act = make_action(name)
    table = get_table(act, SIG2)
    chains = get_chain_table(act, SIG2)
    for cid in range(table.count):
        seen = set()
        for p in table.members(cid):
            small = reduce_rep(act, p)
            seen.add((outside(act, p).table,
                      chains.class_of(once(act, small)), chains.class_of(twice(act, small))))
        assert len(seen) == 1


def test_once_twice_of_identity_agree():
    ident = identity_optic(LENS, 2, 2)
    chains = get_chain_table(LENS, SIG2)
    assert chains.class_of(once(LENS, ident)) == chains.class_of(twice(LENS, ident))


@pytest.mark.parametrize("name", ["lens", "prism", "iso"])
def test_chain_invariant_is_complete(name):
    act = make_action(name)
    chains = get_chain_table(act, SIG2)
    invs = [chain_invariant(act, chains.canon(c)) for c in range(chains.count)]
    assert len(set(invs)) == chains.count
    rng = random.Random(1)
    for _ in range(300):
        ch = chains.rep_at(rng.randrange(chains.n_reps))
        assert chain_invariant(act, ch) == invs[chains.class_of(ch)]


# ------------------------------------------------------------- lawfulness

def test_lawful_lens_count_matches_brute_force():
    lawful = lawful_classes(LENS, 2, 2)
    assert len(lawful) == len(lawful_lens_pairs(2, 2)) == 2
    assert {(concretize(LENS, p).get, concretize(LENS, p).put) for p in lawful} == \
        set(lawful_lens_pairs(2, 2))


def test_simple_lawful_optics():
    assert is_lawful(LENS, identity_optic(LENS, 2, 2))
    swap = fn(2, 2, (1, 0))
    assert is_lawful(LENS, iota(LENS, swap, swap))
    assert is_lawful(ISO, iota(ISO, swap, swap))
    assert not is_lawful(ISO, iota(ISO, swap, fn(2, 2, (0, 1))))
    taut = Representative(OpticSignature(4, 4, 2, 2), (2,), tuple(range(4)), tuple(range(4)))
    assert lawful_verdict(LENS, taut, method="auto").lawful


@pytest.mark.parametrize("S", [1, 2, 3])
def test_lawful_costates_are_identities(S):
    for t in itertools.product(range(S), repeat=S):
        p = morphism_to_costate(LENS, fn(S, S, t))
        assert lawful_verdict(LENS, p, method="auto").lawful == (t == tuple(range(S)))
    table = get_table(LENS, OpticSignature(S, S, 1, 1))
    lawful = [p for p in table.canons() if lawful_verdict(LENS, p, method="auto").lawful]
    assert [costate_to_morphism(LENS, p).table for p in lawful] == [tuple(range(S))]


def test_putput_violation_separates_once_and_twice():
    sig = OpticSignature(3, 3, 2, 2)
    c = Lens(sig, (0, 0, 1), (0, 2, 1, 2, 0, 2))
    assert laws_of(c).laws == {"GetPut": True, "PutGet": True, "PutPut": False}
    p = abstractify(LENS, c)
    v = lawful_verdict(LENS, p, method="auto")
    assert v.outside_identity and v.lawful is False
    assert chain_invariant(LENS, once(LENS, p)) != chain_invariant(LENS, twice(LENS, p))


def test_no_putput_violation_at_size_two():
    # with |S| = |A| = 2 the first two laws already force the third
    for get in itertools.product(range(2), repeat=2):
        for put in itertools.product(range(2), repeat=4):
            r = laws_of(Lens(SIG2, get, put)).laws
            assert not (r["GetPut"] and r["PutGet"]) or r["PutPut"]


@pytest.mark.parametrize("name", ["lens", "prism", "iso", "affine"])
def test_lawfulness_equivalence(name):
    rep = lawfulness_equivalence(make_action(name), (2, 2))
    assert rep.passed, rep.failures[:3]
    assert rep.checked == get_table(make_action(name), SIG2).count


@pytest.mark.parametrize("name,sizes", [("lens", (3, 1)), ("prism", (3, 1)), ("iso", (3, 3)),
                                        ("lens", (1, 3))])
def test_lawfulness_equivalence_size_three(name, sizes):
    act = make_action(name)
    table = get_table(act, OpticSignature(sizes[0], sizes[0], sizes[1], sizes[1]))
    for p in table.canons():
        assert lawful_verdict(act, p, method="auto").lawful == laws_of(concretize(act, p)).overall


def test_sufficient_condition():
    table = get_table(LENS, SIG2)
    hits = 0
    for i in range(table.n_reps):
        p = table.rep_at(i)
        if outside(LENS, p).table == (0, 1) and \
                action_image(LENS, p.M, 2, _inside_code(LENS, p)) is not None:
            hits += 1
            assert is_lawful(LENS, p)
    assert hits > 0


# ----------------------------------------------------------- concrete laws

def test_concrete_law_examples():
    assert laws_of(Lens(SIG2, (0, 1), (0, 1, 0, 1))).overall
    const = laws_of(Lens(SIG2, (0, 0), (0, 1, 0, 1)))
    assert const.laws["PutGet"] is False and const.overall is False
    rep = concrete_laws("lens", Lens(SIG2, (0, 1), (0, 1, 0, 1)))
    assert rep.holds("GetPut", "PutGet", "PutPut")
    with pytest.raises(KindMismatch):
        concrete_laws("prism", Lens(SIG2, (0, 1), (0, 1, 0, 1)))
    with pytest.raises(KindMismatch):
        laws_of(Achromatic(SIG2, (0, 0), (0, 0), (0, 0)))


def test_prism_example_two_of_eighteen():
    sig = OpticSignature(2, 2, 1, 1)
    candidates = [Prism(sig, m, r) for m in itertools.product(range(3), repeat=2)
                  for r in itertools.product(range(2), repeat=1)]
    assert len(candidates) == 18
    assert sum(laws_of(c).overall for c in candidates) == 2


def test_prism_third_law():
    rep = prism_third_law_check(3)
    assert rep.passed and rep.checked > 0 and rep.details["satisfying_first_two"] > 0


def test_overall_is_conjunction():
    for get in itertools.product(range(2), repeat=2):
        for put in itertools.product(range(2), repeat=4):
            r = laws_of(Lens(SIG2, get, put))
            assert r.overall == all(r.laws.values())


def test_setter_and_linear_laws_follow_lens_laws():
    for get in itertools.product(range(2), repeat=2):
        for put in itertools.product(range(2), repeat=4):
            c = Lens(SIG2, get, put)
            lawful = laws_of(c).overall
            assert laws_of(lens_to_linear(c)).overall == lawful
            if lawful:
                assert laws_of(convert(c, "setter")).overall
    assert set(laws_of(convert(Lens(SIG2, (0, 1), (0, 1, 0, 1)), "setter")).laws) == \
        {"identity", "composition"}


# -------------------------------------------------------- inside, search

def test_inside_constant_on_classes():
    table = get_table(LENS, OpticSignature(2, 2, 1, 1))
    for cid in range(table.count):
        assert len({inside(LENS, reduce_rep(LENS, p))[1] for p in table.members(cid)}) == 1


def test_onthenose():
    ident = identity_optic(LENS, 2, 2)
    res = onthenose_search(LENS, ident)
    assert res.status == "found" and res.steps == 0
    for p in lawful_classes(LENS, 2, 2):
        found = onthenose_search(LENS, p)
        assert found.status == "found"
        q = found.rep
        assert action_image(LENS, q.M, 2, _inside_code(LENS, q)) is not None
    bad = morphism_to_costate(LENS, fn(2, 2, (0, 0)))
    assert onthenose_search(LENS, bad).status == "precondition"


def test_lawful_closure():
    for name in ("lens", "prism", "iso"):
        rep = lawful_closure_checks(make_action(name), (2, 2))
        assert rep.passed, rep.failures[:3]
    lawful = lawful_classes(LENS, 2, 2)
    for p, q in itertools.product(lawful, repeat=2):
        assert is_lawful(LENS, compose_optics(LENS, p, q))
