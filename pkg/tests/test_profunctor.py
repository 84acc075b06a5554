from __future__ import annotations

import itertools
import json

import pytest

from optikit.action import make_action
from optikit.concrete import Lens, abstractify
from optikit.errors import SignatureMismatch
from optikit.laws import is_lawful, laws_of, once
from optikit.optic_core import (OpticSignature, compose_optics, get_table, identity_optic,
                                same_class)
from optikit.profunctor import (comonoid_delta, comonoid_epsilon, comonoid_report,
                                counit_left, counit_right, exchange_morphism, hom_module,
                                is_comonoid_homomorphism, mutate_zeta, normal_form,
                                optic_to_profunctor, phi_exchange, profunctor_to_optic,
                                profunctor_to_rep)

LENS, PRISM, ISO = make_action("lens"), make_action("prism"), make_action("iso")
SIG2 = OpticSignature(2, 2, 2, 2)


@pytest.fixture(scope="module")
def phi_lens():
    return phi_exchange(LENS, 2, 2)


@pytest.fixture(scope="module")
def lens_validation(phi_lens):
    return phi_lens.validate()


# ---------------------------------------------------------- Tambara modules

def test_phi_exchange_validates(lens_validation):
    assert lens_validation.ok, lens_validation.failed()
    squares = lens_validation.to_json()["squares"]
    assert set(squares) == {"identity", "composition", "naturality", "dinaturality", "tensor", "unit"}
    assert all(v["pass"] > 0 and v["fail"] == 0 for v in squares.values())
    json.dumps(lens_validation.to_json())


@pytest.mark.parametrize("name", ["prism", "iso"])
def test_phi_exchange_validates_other_actions(name):
    rep = phi_exchange(make_action(name), 2, 2).validate()
    assert rep.ok, rep.failed()


@pytest.mark.parametrize("name", ["lens", "iso"])
def test_mutation_rejected(name):
    module = phi_exchange(make_action(name), 2, 2)
    rep = mutate_zeta(module).validate()
    assert not rep.ok
    assert "unit" in rep.failed()


def test_hom_module():
    module = hom_module(LENS)
    assert module.validate().ok
    assert not mutate_zeta(module).validate().ok


def test_phi_values(phi_lens):
    assert phi_lens.base.value_size(2, 2) == 64 == get_table(LENS, SIG2).count
    ident = phi_lens.base.identity_element()
    assert ident in phi_lens.base.elements(2, 2)
    # zeta at the unit residual is the identity on normal forms
    for x in phi_lens.base.elements(2, 2):
        assert phi_lens.zeta(LENS.unit, 2, 2, x) == x


# ------------------------------------------------------------ round trip

@pytest.mark.parametrize("name,sizes", [("lens", (2, 2, 2, 2)), ("prism", (2, 2, 2, 2)),
                                        ("iso", (2, 2, 2, 2)), ("lens", (2, 1, 1, 2))])
def test_roundtrip_all_classes(name, sizes):
    act = make_action(name)
    table = get_table(act, OpticSignature(*sizes))
    ids = [profunctor_to_optic(optic_to_profunctor(act, p)) for p in table.canons()]
    assert ids == list(range(table.count))


def test_roundtrip_independent_of_representative():
    table = get_table(LENS, SIG2)
    for cid in range(0, table.count, 7):
        values = {optic_to_profunctor(LENS, p).value for p in table.members(cid)}
        assert len(values) == 1


def test_distinct_classes_distinct_prof_optics():
    table = get_table(LENS, SIG2)
    values = {optic_to_profunctor(LENS, p).value for p in table.canons()}
    assert len(values) == table.count


def test_identity_is_identity_transformation(phi_lens):
    t = optic_to_profunctor(LENS, identity_optic(LENS, 2, 2))
    for x in phi_lens.base.elements(2, 2):
        assert t.evaluate(phi_lens, x) == x
    hom = hom_module(LENS)
    for h in hom.base.elements(2, 2):
        assert t.evaluate(hom, h) == h


def test_value_at_identity_is_the_optic():
    for p in get_table(LENS, SIG2).canons():
        assert same_class(LENS, profunctor_to_rep(optic_to_profunctor(LENS, p)), p)


def test_replay_is_composition(phi_lens):
    table = get_table(LENS, SIG2)
    for p in table.canons()[::5]:
        t = optic_to_profunctor(LENS, p)
        for x in phi_lens.base.elements(2, 2)[::3]:
            assert t.evaluate(phi_lens, x) == normal_form(LENS, compose_optics(LENS, x, p))


def test_replay_on_hom_module_is_over():
    hom = hom_module(LENS, universe=(0, 1, 2))
    for get in itertools.product(range(2), repeat=2):
        for put in itertools.product(range(2), repeat=4):
            c = Lens(SIG2, get, put)
            t = optic_to_profunctor(LENS, abstractify(LENS, c))
            for h in hom.base.elements(2, 2):
                over = tuple(c.update(s, h[c.view(s)]) for s in range(2))
                assert tuple(t.evaluate(hom, h)) == over


def test_naturality_in_modules():
    # a module map Phi(E_B) -> Phi(E_C) commutes with every replayed optic
    B = C = 2
    src, dst = phi_exchange(LENS, B, B), phi_exchange(LENS, C, C)
    maps = [(f, g) for f in itertools.product(range(C), repeat=B)
            for g in itertools.product(range(B), repeat=C)]
    table = get_table(LENS, OpticSignature(1, 1, 2, 2))
    for f, g in maps[::3]:
        alpha = exchange_morphism(LENS, f, g, B, B, C, C)
        for p in table.canons()[::3]:
            t = optic_to_profunctor(LENS, p)
            for x in src.base.elements(2, 2)[::4]:
                assert alpha(t.evaluate(src, x)) == t.evaluate(dst, alpha(x))


# ---------------------------------------------------------------- comonoids

def test_epsilon_and_delta():
    ident = identity_optic(LENS, 2, 2)
    assert comonoid_epsilon(LENS, ident) == (0, 1)
    for p in get_table(LENS, SIG2).canons():
        d = comonoid_delta(LENS, p)
        assert d == once(LENS, p)
        assert counit_left(LENS, d) == p and counit_right(LENS, d) == p
    with pytest.raises(SignatureMismatch):
        comonoid_epsilon(LENS, identity_optic(LENS, 2, 3))


def test_epsilon_constant_on_classes():
    table = get_table(LENS, OpticSignature(2, 2, 1, 1))
    for cid in range(table.count):
        assert len({comonoid_epsilon(LENS, p) for p in table.members(cid)}) == 1


@pytest.mark.parametrize("name", ["lens", "prism", "iso"])
def test_comonoid_agrees_with_lawful(name):
    act = make_action(name)
    table = get_table(act, SIG2)
    hom = [is_comonoid_homomorphism(act, p) for p in table.canons()]
    lawful = [is_lawful(act, p) for p in table.canons()]
    assert hom == lawful
    assert sum(hom) == 2


def test_putget_violation_fails_epsilon_square():
    c = Lens(SIG2, (0, 0), (0, 1, 0, 1))
    assert not laws_of(c).laws["PutGet"]
    rep = comonoid_report(LENS, abstractify(LENS, c), audit=False)
    assert not rep.traced_epsilon and not rep.homomorphism


def test_comonoid_audit_has_no_divergence():
    for p in get_table(LENS, SIG2).canons()[::9]:
        rep = comonoid_report(LENS, p, audit=True, universe=(0, 1, 2))
        assert not rep.divergence
        assert rep.audit_skipped == 0
        if rep.homomorphism:
            assert rep.audit_failures == 0
