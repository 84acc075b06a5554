from __future__ import annotations

import itertools
import json

import pytest
from hypothesis import given, settings, strategies as st

from oracles import lawful_lens_pairs
from optikit.action import StateMonad, make_action
from optikit.concrete import (Affine, Iso, Lens, Prism, StatefulLens, WriterLens, abstractify, compose_concrete,
                              compose_stateful, concrete_count, concretize, constant_complement,
                              convert, coordinate_traversal, from_json, join_kind,
                              lens_to_linear, linear_to_lens)
from optikit.errors import (DomainMismatch, KindMismatch, NoCommonKind, NotAbove,
                            SignatureMismatch, StateMismatch)
from optikit.laws import laws_of
from optikit.optic_core import OpticSignature, compose_optics, get_table, same_class
from optikit.suites import lawful_stateful_examples

SIG2 = OpticSignature(2, 2, 2, 2)
LENS, PRISM, ISO, AFFINE = (make_action(n) for n in ("lens", "prism", "iso", "affine"))


def tables(length, bound):
    return itertools.product(range(bound), repeat=length)


def all_lenses(sig):
    S, Sp, A, Ap = sig.sizes
    return [Lens(sig, g, p) for g in tables(S, A) for p in tables(S * Ap, Sp)]


def all_prisms(sig):
    S, Sp, A, Ap = sig.sizes
    return [Prism(sig, m, r) for m in tables(S, Sp + A) for r in tables(Ap, Sp)]


def all_isos(sig):
    S, Sp, A, Ap = sig.sizes
    return [Iso(sig, t, f) for t in tables(S, A) for f in tables(Ap, Sp)]


def all_affines(sig):
    S, Sp, A, Ap = sig.sizes
    return [Affine(sig, s) for s in tables(S, Sp + Sp ** Ap * A)]


ENUM = {"lens": all_lenses, "prism": all_prisms, "iso": all_isos, "affine": all_affines}


# ------------------------------------------------------------ round trips

@pytest.mark.parametrize("kind", ["lens", "prism", "iso", "affine"])
@pytest.mark.parametrize("sizes", [(1, 1, 1, 1), (2, 1, 2, 1), (1, 2, 1, 2), (2, 2, 2, 2)])
def test_roundtrip_pointwise_and_on_classes(kind, sizes):
    act, sig = make_action(kind), OpticSignature(*sizes)
    values = ENUM[kind](sig)
    assert len(values) == concrete_count(kind, sig)
    for c in values:
        assert concretize(act, abstractify(act, c)) == c
    table = get_table(act, sig)
    assert table.count == len(values)
    for p in table.canons():
        assert same_class(act, abstractify(act, concretize(act, p)), p)


def test_abstractify_examples():
    ident = Lens(SIG2, (0, 1), (0, 1, 0, 1))
    from optikit.optic_core import identity_optic, iota
    from optikit.finset import FiniteFunction
    assert same_class(LENS, abstractify(LENS, ident), identity_optic(LENS, 2, 2))
    classes = {get_table(LENS, SIG2).class_of(abstractify(LENS, c)) for c in all_lenses(SIG2)}
    assert len(classes) == 64
    iso = Iso(SIG2, (1, 0), (0, 0))
    rep = iota(ISO, FiniteFunction(2, 2, (1, 0)), FiniteFunction(2, 2, (0, 0)))
    assert same_class(ISO, abstractify(ISO, iso), rep)


def test_prism_roundtrip_example():
    c = Prism(SIG2, (0, 3), (1, 0))
    rep = abstractify(PRISM, c)
    assert rep.r == (0, 1, 1, 0)
    assert concretize(PRISM, rep) == c


def test_affine_count_example():
    assert get_table(AFFINE, SIG2).count == concrete_count("affine", SIG2) == (2 + 4 * 2) ** 2 == 100


@pytest.mark.parametrize("name", ["achromatic", "grate", "writer", "state"])
def test_other_actions_roundtrip(name):
    act = make_action(name)
    sig = OpticSignature(1, 1, 1, 1) if name in ("writer", "state") else OpticSignature(1, 1, 2, 2)
    table = get_table(act, sig) if name != "state" else get_table(act, sig, 2, audit=False)
    forms = {concretize(act, p) for p in table.canons()}
    assert len(forms) == table.count
    for c in forms:
        assert concretize(act, abstractify(act, c)) == c


def test_kind_mismatch():
    with pytest.raises(KindMismatch):
        abstractify(PRISM, Lens(SIG2, (0, 1), (0, 1, 0, 1)))
    with pytest.raises(KindMismatch):
        concretize(PRISM, abstractify(PRISM, Prism(SIG2, (0, 1), (0, 1))), kind="lens")


def test_json_roundtrip_every_kind():
    samples = [Lens(SIG2, (0, 1), (0, 1, 0, 1)), Prism(SIG2, (0, 3), (1, 0)),
               Iso(SIG2, (1, 0), (1, 0)), Affine(SIG2, (0, 9)),
               lens_to_linear(Lens(SIG2, (0, 1), (0, 1, 0, 1))),
               convert(Lens(SIG2, (0, 1), (0, 1, 0, 1)), "traversal"),
               convert(Lens(SIG2, (0, 1), (0, 1, 0, 1)), "setter"),
               convert(Iso(SIG2, (1, 0), (1, 0)), "grate"),
               WriterLens(OpticSignature(1, 1, 1, 1), ((0, 1), (1, 0)), (1,), (0,)),
               lawful_stateful_examples()["xor"]]
    for c in samples:
        text = json.dumps(c.to_json())
        assert from_json(json.loads(text)) == c
    with pytest.raises(KindMismatch):
        from_json({"kind": "bogus", "sig": [1, 1, 1, 1]})


def test_component_typechecks():
    with pytest.raises((DomainMismatch, ValueError)):
        Lens(SIG2, (0, 2), (0, 1, 0, 1))
    with pytest.raises((DomainMismatch, ValueError)):
        Prism(SIG2, (0, 1, 2), (0, 1))


# ------------------------------------------------------------ composition

def test_lens_composition_formula():
    # get = get2 . get1 and put(t, a) = put1(t, put2(get1 t, a)), evaluated by hand
    sig_in, sig_out = OpticSignature(2, 2, 2, 2), OpticSignature(2, 2, 2, 2)
    for i in all_lenses(sig_in)[::5]:
        for o in all_lenses(sig_out)[::3]:
            c = compose_concrete(o, i)
            for t in range(2):
                assert c.view(t) == o.view(i.view(t))
                for a in range(2):
                    assert c.update(t, a) == i.update(t, o.update(i.view(t), a))


@pytest.mark.parametrize("kind", ["lens", "prism", "iso", "affine"])
def test_composition_matches_oracle(kind):
    act = make_action(kind)
    values = ENUM[kind](SIG2)
    step = 1 if kind != "affine" else 3
    for o in values[::step]:
        ro = abstractify(act, o)
        for i in values[::step]:
            expected = concretize(act, compose_optics(act, ro, abstractify(act, i)))
            assert compose_concrete(o, i) == expected


def test_lens_after_prism_is_affine_oracle():
    lenses, prisms = all_lenses(SIG2)[::4], all_prisms(SIG2)[::4]
    for o in lenses:
        for i in prisms:
            c = compose_concrete(o, i)
            assert c.kind == "affine"
            oa, ia = convert(o, "affine"), convert(i, "affine")
            rep = compose_optics(AFFINE, abstractify(AFFINE, oa), abstractify(AFFINE, ia))
            assert concretize(AFFINE, rep) == c


def test_iso_composition():
    a, b = Iso(SIG2, (1, 0), (0, 0)), Iso(SIG2, (1, 1), (1, 0))
    c = compose_concrete(a, b)
    assert c == Iso(SIG2, tuple(a.to[x] for x in b.to), tuple(b.frm[x] for x in a.frm))


def test_no_common_kind_and_mismatch():
    grate = convert(Iso(SIG2, (1, 0), (1, 0)), "grate")
    with pytest.raises(NoCommonKind):
        compose_concrete(Lens(SIG2, (0, 1), (0, 1, 0, 1)), grate)
    with pytest.raises(NoCommonKind):
        join_kind("lens", "grate")
    assert join_kind("lens", "prism") == "affine"
    assert join_kind("iso", "grate") == "grate"
    with pytest.raises(SignatureMismatch):
        compose_concrete(Lens(SIG2, (0, 1), (0, 1, 0, 1)),
                         Lens(OpticSignature(1, 1, 3, 3), (0,), (0, 0, 0)))


def test_writer_composition_matches_oracle():
    act = make_action("writer")
    sig = OpticSignature(1, 1, 1, 1)
    forms = [concretize(act, p) for p in get_table(act, sig).canons()]
    for o, i in itertools.product(forms, repeat=2):
        ref = concretize(act, compose_optics(act, abstractify(act, o), abstractify(act, i)))
        assert compose_concrete(o, i) == ref


# ------------------------------------------------------------- conversions

def test_conversion_examples():
    for c in all_lenses(SIG2):
        s_ = convert(c, "setter")
        for f in tables(2, 2):
            out = s_.apply(f)
            assert out == tuple(c.update(s, f[c.view(s)]) for s in range(2))
    iso = Iso(SIG2, (1, 0), (0, 0))
    assert convert(iso, "lens") == Lens(SIG2, (1, 0), (0, 0, 0, 0))
    for p in all_prisms(SIG2):
        a = convert(p, "affine")
        for s in range(2):
            tag, x = p.match(s)
            case = a.case(s)
            assert case == ((0, x) if tag == 0 else (1, p.review, x))
    with pytest.raises(NotAbove):
        convert(Lens(SIG2, (0, 1), (0, 1, 0, 1)), "prism")
    with pytest.raises(NotAbove):
        convert(Lens(SIG2, (0, 1), (0, 1, 0, 1)), "grate")


def test_conversion_preserves_semantics_of_traversal():
    for c in all_affines(SIG2):
        t, s_ = convert(c, "traversal"), convert(c, "setter")
        for f in tables(2, 2):
            expected = []
            for s in range(2):
                case = c.case(s)
                expected.append(case[1] if case[0] == 0 else case[1][f[case[2]]])
            assert s_.apply(f) == tuple(expected)
            assert tuple(b.rebuild([f[a] for a in b.focus], 2) for b in t.branches) == tuple(expected)


def test_conversion_preserves_lawfulness():
    for c in all_lenses(SIG2):
        lawful = laws_of(c).overall
        for kind in ("affine", "traversal", "setter"):
            if lawful:
                assert laws_of(convert(c, kind)).overall, kind
        assert laws_of(lens_to_linear(c)).overall == lawful


def test_linear_lens_roundtrip():
    for c in all_lenses(SIG2):
        assert linear_to_lens(lens_to_linear(c)) == c


@pytest.mark.parametrize("n,A", [(n, A) for n in range(1, 4) for A in range(0, 3)])
def test_coordinate_traversal_lawful(n, A):
    t = coordinate_traversal(n, A)
    assert laws_of(t).overall
    assert t.sig.S == A ** n


# --------------------------------------------------------- stateful lenses

def identity_stateful(S, q):
    T = StateMonad(q)
    eta = T.eta(S)
    return StatefulLens(OpticSignature(S, S, S, S), q, tuple(eta),
                        tuple(eta[a] for s in range(S) for _ in range(q) for a in range(S)))


def test_stateful_identity():
    ident = identity_stateful(2, 2)
    assert laws_of(ident).overall
    assert compose_stateful(ident, ident) == ident
    for c in lawful_stateful_examples().values():
        assert compose_stateful(c, ident) == c
        assert compose_stateful(ident, c) == c


def test_stateful_composites_lawful_with_kleisli_get():
    ex = lawful_stateful_examples()
    for o, i in itertools.product(ex.values(), repeat=2):
        comp = compose_stateful(o, i)
        assert laws_of(comp).overall
        for t, q0 in itertools.product(range(2), repeat=2):
            s, q1 = i.run_get(t, q0)
            assert comp.run_get(t, q0) == o.run_get(s, q1)


def test_stateful_coend_plumbing_matches_oracle():
    act = make_action("state", state_size=2)
    ex = lawful_stateful_examples()
    for o, i in itertools.product(ex.values(), repeat=2):
        rep = compose_optics(act, abstractify(act, o), abstractify(act, i))
        assert concretize(act, rep) == compose_stateful(o, i, plumbing="coend")


def test_stateful_state_mismatch():
    a, b = identity_stateful(2, 2), identity_stateful(2, 1)
    with pytest.raises(StateMismatch):
        compose_stateful(a, b)


# ----------------------------------------------------- constant complement

@pytest.mark.parametrize("S,A", [(1, 1), (2, 1), (2, 2), (3, 1), (4, 2), (3, 3)])
def test_constant_complement(S, A):
    sig = OpticSignature(S, S, A, A)
    pairs = lawful_lens_pairs(S, A)
    assert pairs, "every S with |A| dividing |S| has lawful lenses"
    for get, put in pairs:
        c = Lens(sig, get, put)
        split = constant_complement(c)
        assert split.inverse
        assert len(split.fibre) * A == S
        rep = split.representative()
        assert concretize(LENS, rep) == c
        if S <= 2:
            assert same_class(LENS, rep, abstractify(LENS, c))


def test_lawful_lens_counts():
    # bijections S ~ C x A up to relabelling C, so |S|! / |C|!
    assert len(lawful_lens_pairs(2, 2)) == 2
    assert len(lawful_lens_pairs(4, 2)) == 12
    assert len(lawful_lens_pairs(3, 2)) == 0


def test_constant_complement_rejects_unlawful():
    with pytest.raises(DomainMismatch):
        constant_complement(Lens(SIG2, (0, 1), (0, 0, 1, 1)))
    with pytest.raises(SignatureMismatch):
        constant_complement(Lens(OpticSignature(2, 1, 2, 1), (0, 1), (0, 0)))


@given(st.integers(0, 63))
@settings(max_examples=64, deadline=None)
def test_concretize_injective_on_lens_classes(cid):
    table = get_table(LENS, SIG2)
    c = concretize(LENS, table.canon(cid))
    assert table.class_of(abstractify(LENS, c)) == cid
