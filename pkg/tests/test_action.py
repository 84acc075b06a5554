from __future__ import annotations

import itertools

import pytest

from optikit.action import (ACTION_NAMES, StateMonad, WriterMonad, act_morphism, act_object,
                            enumerate_residuals, make_action, residual_tensor)
from optikit.errors import DomainMismatch, InvalidMonoid, UnsupportedAction
from optikit.finset import FiniteFunction, identity

ALL = [make_action(n) for n in ACTION_NAMES]
MONADS = [WriterMonad([[0, 1, 2], [1, 2, 0], [2, 0, 1]]), WriterMonad([[0, 1], [1, 1]]),
          StateMonad(1), StateMonad(2)]


def then(f, g):
    return [g[x] for x in f]


def funcs(a, b):
    return [list(t) for t in itertools.product(range(b), repeat=a)]


def mu(T, n):
    tn = T.size(n)
    return T.kleisli(list(range(T.size(tn))), list(range(tn)), tn, n)


def ids(acts):
    return [a.name for a in acts]


# ------------------------------------------------------------- examples

def test_act_object_examples():
    assert act_object(make_action("lens"), (2,), 3).size == 6
    assert act_object(make_action("affine"), (1, 2), 2).size == 5
    assert act_object(make_action("grate"), (2,), 2).size == 4
    assert act_object(make_action("prism"), (2,), 3).size == 5
    assert act_object(make_action("achromatic"), (2,), 3).size == 9
    assert act_object(make_action("iso"), (), 3).size == 3


def test_act_morphism_examples():
    assert act_morphism(make_action("lens"), (0, 1), (2,), (2,), 2) == identity(4)
    assert act_morphism(make_action("prism"), (0, 0), (2,), (1,), 1) == FiniteFunction(3, 2, [0, 0, 1])
    with pytest.raises(DomainMismatch):
        act_morphism(make_action("lens"), (0, 3), (2,), (2,), 2)


def test_writer_pure_morphism_is_embedded_product_map():
    w, lens = make_action("writer"), make_action("lens")
    for M, N in itertools.product(w.residuals(2), repeat=2):
        for phi in w.morphisms(M, N):
            f = act_morphism(w, phi, M, N, 2)
            plain = act_morphism(lens, phi, M, N, 2)
            eta = w.monad.eta(w.act_size(N, 2))
            assert f.table == tuple(eta[y] for y in plain.table)


def test_residual_tensor_examples():
    lens = make_action("lens")
    MN, med = residual_tensor(lens, (2,), (3,), 2)
    assert MN == (6,) and med.is_bijection()
    iso = make_action("iso")
    MN, med = residual_tensor(iso, iso.unit, iso.unit, 3)
    assert MN == iso.unit and med == identity(3)
    assert residual_tensor(make_action("affine"), (1, 1), (1, 1), 2)[0] == (2, 1)


def test_enumerate_residuals_examples():
    assert len(enumerate_residuals(make_action("iso"), 5)) == 1
    assert {M[0] for M in enumerate_residuals(make_action("lens"), 3)} >= {1, 2, 3}
    assert set(enumerate_residuals(make_action("affine"), 1)) == {(0, 0), (0, 1), (1, 0), (1, 1)}
    with pytest.raises(ValueError):
        enumerate_residuals(make_action("lens"), 0)


@pytest.mark.parametrize("act", ALL, ids=ids(ALL))
def test_residuals_deterministic_and_distinct(act):
    rs = enumerate_residuals(act, 3)
    assert rs == enumerate_residuals(act, 3)
    assert len(rs) == len(set(rs))
    assert act.unit in enumerate_residuals(act, 2)


def test_make_action_rejects_unknown():
    with pytest.raises(UnsupportedAction):
        make_action("setter")


@pytest.mark.parametrize("table", [[[0, 1], [0, 1]], [[1, 0], [0, 0]], [], [[0, 2], [1, 0]]])
def test_writer_rejects_non_monoid(table):
    with pytest.raises(InvalidMonoid):
        make_action("writer", table)


# ---------------------------------------------------------- properties

@pytest.mark.parametrize("act", ALL, ids=ids(ALL))
def test_act_fn_functorial(act):
    for M in act.residuals(2):
        for n, m, k in itertools.product(range(3), repeat=3):
            assert act.act_fn(M, list(range(n)), n, n) == list(range(act.act_size(M, n)))
            for f in funcs(n, m):
                Mf = act.act_fn(M, f, n, m)
                for g in funcs(m, k):
                    assert act.act_fn(M, then(f, g), n, k) == then(Mf, act.act_fn(M, g, m, k))


@pytest.mark.parametrize("act", ALL, ids=ids(ALL))
def test_res_fn_functorial_and_natural(act):
    R = act.residuals(2)
    for n in range(3):
        for M in R:
            assert act.res_fn(act.res_identity(M), M, M, n) == list(range(act.act_size(M, n)))
        for M, N in itertools.product(R, repeat=2):
            for phi in act.morphisms(M, N):
                pn = act.res_fn(phi, M, N, n)
                for m in range(3):
                    for f in funcs(n, m):
                        assert then(pn, act.act_fn(N, f, n, m)) == \
                            then(act.act_fn(M, f, n, m), act.res_fn(phi, M, N, m))
                for K in R:
                    for psi in act.morphisms(N, K):
                        assert act.res_fn(act.res_compose(phi, psi), M, K, n) == \
                            then(pn, act.res_fn(psi, N, K, n))


@pytest.mark.parametrize("act", ALL, ids=ids(ALL))
def test_mediators_bijective_natural_and_coherent(act):
    R = act.residuals(2)
    for M, N in itertools.product(R, repeat=2):
        MN = act.tensor(M, N)
        for n in range(3):
            med = act.mediator(M, N, n)
            assert sorted(med) == list(range(act.act_size(M, act.act_size(N, n))))
            for m in range(3):
                for f in funcs(n, m)[:9]:
                    Nf = act.act_fn(N, f, n, m)
                    lhs = then(act.act_fn(MN, f, n, m), act.mediator(M, N, m))
                    rhs = then(med, act.act_fn(M, Nf, act.act_size(N, n), act.act_size(N, m)))
                    assert lhs == rhs
    for M, N, K in itertools.product(R, repeat=3):
        MN, NK = act.tensor(M, N), act.tensor(N, K)
        L, Rr = act.tensor(MN, K), act.tensor(M, NK)
        assert L == Rr
        for n in range(3):
            p1 = then(act.mediator(MN, K, n), act.mediator(M, N, act.act_size(K, n)))
            a, b = act.act_size(NK, n), act.act_size(N, act.act_size(K, n))
            p2 = then(act.mediator(M, NK, n), act.act_fn(M, act.mediator(N, K, n), a, b))
            assert p1 == then(act.res_fn(act.associator(M, N, K), L, Rr, n), p2)


@pytest.mark.parametrize("act", ALL, ids=ids(ALL))
def test_unit_coherence(act):
    for M in act.residuals(2):
        assert act.tensor(act.unit, M) == M
        for n in range(3):
            size = act.act_size(M, n)
            assert then(act.mediator(act.unit, M, n), act.unitor(size)) == list(range(size))
    for n in range(4):
        assert sorted(act.unitor(n)) == list(range(n)) == list(range(act.act_size(act.unit, n)))


@pytest.mark.parametrize("T", MONADS, ids=lambda T: f"{type(T).__name__}")
def test_monad_laws(T):
    for a, b, c in itertools.product(range(3), repeat=3):
        for f in funcs(a, T.size(b))[:20]:
            assert T.kleisli(f, T.eta(b), b, b) == f
            assert T.kleisli(T.eta(a), f, a, b) == f
            for g in funcs(b, T.size(c))[:10]:
                for h in funcs(c, T.size(2))[:5]:
                    assert T.kleisli(T.kleisli(f, g, b, c), h, c, 2) == \
                        T.kleisli(f, T.kleisli(g, h, c, 2), b, 2)


@pytest.mark.parametrize("T", MONADS, ids=lambda T: f"{type(T).__name__}")
def test_strength_squares(T):
    for m, n in itertools.product(range(3), repeat=2):
        th, tn = T.strength(m, n), T.size(n)
        eta = T.eta(n)
        assert [th[i * tn + eta[x]] for i in range(m) for x in range(n)] == T.eta(m * n)
        mun = mu(T, n)
        lhs = [th[i * tn + mun[c]] for i in range(m) for c in range(T.size(tn))]
        assert lhs == T.kleisli(T.strength(m, tn), th, m * tn, m * n)


@pytest.mark.parametrize("name", ["lens", "writer", "state"])
def test_act_hom_functorial(name):
    act = make_action(name)
    for M in act.residuals(2):
        for nx, ny, nz in itertools.product(range(3), repeat=3):
            assert act.act_hom(M, act.hom_identity(nx), nx, nx) == \
                act.hom_identity(act.act_size(M, nx))
            for f in funcs(nx, act.hom_size(ny))[:12]:
                for g in funcs(ny, act.hom_size(nz))[:12]:
                    lhs = act.act_hom(M, act.hom_compose(f, g, ny, nz), nx, nz)
                    rhs = act.hom_compose(act.act_hom(M, f, nx, ny), act.act_hom(M, g, ny, nz),
                                          act.act_size(M, ny), act.act_size(M, nz))
                    assert lhs == rhs


def test_state_monad_run():
    T = StateMonad(2)
    code = T.eta(3)[1]
    assert T.run(code, 3, 0) == (1, 0) and T.run(code, 3, 1) == (1, 1)
