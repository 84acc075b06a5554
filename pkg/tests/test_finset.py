from __future__ import annotations

import itertools

import pytest
from hypothesis import given, strategies as st

from optikit.errors import DomainMismatch, Overflow
from optikit.finset import (FiniteFunction, FiniteSet, StructuredObject, compose,
                            coproduct_map, count_functions, enumerate_functions, equal_fn,
                            exp_decode, exp_encode, identity, product_map)


@st.composite
def functions(draw, dom=None, cod=None):
    n = draw(st.integers(0, 3)) if dom is None else dom
    m = draw(st.integers(1, 3)) if cod is None else cod
    table = draw(st.lists(st.integers(0, m - 1), min_size=n, max_size=n)) if m else []
    return FiniteFunction(n, m, table)


@st.composite
def composable_triples(draw):
    a, b, c, d = (draw(st.integers(1, 3)) for _ in range(4))
    return (draw(functions(a, b)), draw(functions(b, c)), draw(functions(c, d)))


def test_enumeration_examples():
    fs = list(enumerate_functions(2, 2))
    assert len(fs) == 4 and fs[0].table == (0, 0)
    assert len(list(enumerate_functions(0, 3))) == 1
    assert list(enumerate_functions(2, 0)) == []


@pytest.mark.parametrize("a,b", [(a, b) for a in range(4) for b in range(4)])
def test_enumeration_complete_and_distinct(a, b):
    tables = [f.table for f in enumerate_functions(a, b)]
    assert len(tables) == len(set(tables)) == count_functions(a, b) == b ** a
    assert tables == sorted(tables)
    assert set(tables) == set(itertools.product(range(b), repeat=a))


def test_enumeration_cap():
    with pytest.raises(Overflow):
        list(enumerate_functions(5, 5, cap=100))


def test_equal_fn_examples():
    f = FiniteFunction(2, 2, [0, 1])
    assert equal_fn(f, FiniteFunction(2, 2, [0, 1]))
    assert not equal_fn(f, FiniteFunction(2, 2, [1, 0]))
    assert equal_fn(compose(f, identity(2)), f)
    assert not equal_fn(FiniteFunction(2, 2, [0, 0]), FiniteFunction(2, 3, [0, 0]))


def test_function_rejects_bad_table():
    with pytest.raises((DomainMismatch, ValueError)):
        FiniteFunction(2, 2, [0, 2])
    with pytest.raises((DomainMismatch, ValueError)):
        FiniteFunction(2, 2, [0])


def test_compose_mismatch():
    with pytest.raises(DomainMismatch):
        compose(FiniteFunction(1, 2, [0]), FiniteFunction(3, 1, [0, 0, 0]))


def test_category_laws_exhaustive():
    for a, b, c, d in itertools.product(range(3), repeat=4):
        for f in enumerate_functions(a, b):
            assert compose(identity(a), f) == f == compose(f, identity(b))
            for g in enumerate_functions(b, c):
                fg = compose(f, g)
                for h in enumerate_functions(c, d):
                    assert compose(fg, h) == compose(f, compose(g, h))


@given(composable_triples())
def test_associativity_property(t):
    f, g, h = t
    assert compose(compose(f, g), h) == compose(f, compose(g, h))


@given(functions())
def test_json_roundtrip(f):
    assert FiniteFunction.from_json(f.to_json()) == f
    assert FiniteSet.from_json(f.dom.to_json()) == f.dom


@given(st.integers(1, 4), st.data())
def test_exp_roundtrip(base, data):
    length = data.draw(st.integers(0, 4))
    values = data.draw(st.lists(st.integers(0, base - 1), min_size=length, max_size=length))
    code = exp_encode(values, base)
    assert 0 <= code < base ** length
    assert list(exp_decode(code, base, length)) == values


@pytest.mark.parametrize("a,b", [(a, b) for a in range(4) for b in range(4)])
@pytest.mark.parametrize("kind", ["product", "coproduct", "exponential"])
def test_mediators_exhaustive(kind, a, b):
    assert StructuredObject(kind, a, b).check_mediators()


def test_structured_sizes():
    assert StructuredObject("product", 2, 3).carrier.size == 6
    assert StructuredObject("coproduct", 2, 3).carrier.size == 5
    assert StructuredObject("exponential", 2, 3).carrier.size == 9
    assert StructuredObject("unit").carrier.size == 1
    with pytest.raises(TypeError):
        StructuredObject("product", 2, 2).inl


@given(functions(), functions())
def test_product_and_coproduct_maps(f, g):
    P = StructuredObject("product", f.dom, g.dom)
    Q = StructuredObject("product", f.cod, g.cod)
    fg = product_map(f, g)
    for x in f.dom:
        for y in g.dom:
            assert fg(P.pair(x, y)) == Q.pair(f(x), g(y))
    h = coproduct_map(f, g)
    C = StructuredObject("coproduct", f.cod, g.cod)
    assert compose(StructuredObject("coproduct", f.dom, g.dom).inl, h) == compose(f, C.inl)
    assert compose(StructuredObject("coproduct", f.dom, g.dom).inr, h) == compose(g, C.inr)
