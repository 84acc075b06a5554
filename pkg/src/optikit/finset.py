"""Finite sets, total functions and their canonical (co)product structure.

Elements of a finite set of size ``n`` are the integers ``0..n-1``.  Derived
objects use frozen index encodings so that every table is bit-exact:

* product ``A x B``: the pair ``(a, b)`` is ``a * |B| + b``
* coproduct ``A + B``: ``inl(a) = a`` and ``inr(b) = |A| + b``
* exponential ``B^A``: the function ``h`` is ``sum(h(a) * |B|**a)``
* unit: the one-element set
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence, Union

from .caps import check_cap, default_caps
from .errors import DomainMismatch

__all__ = [
    "FiniteSet", "FiniteFunction", "StructuredObject", "SetLike",
    "as_set", "identity", "compose", "equal_fn", "build_structured",
    "enumerate_functions", "count_functions", "product_map", "coproduct_map",
    "exp_encode", "exp_decode",
]


@dataclass(frozen=True)
class FiniteSet:
    size: int
    labels: tuple[str, ...] | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if not isinstance(self.size, int) or self.size < 0:
            raise ValueError(f"size must be a non-negative int, got {self.size!r}")
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(str(x) for x in self.labels))
            if len(self.labels) != self.size:
                raise ValueError("label list must have exactly `size` entries")

    def __len__(self) -> int:
        return self.size

    def __iter__(self) -> Iterator[int]:
        return iter(range(self.size))

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels is not None else str(i)

    def to_json(self) -> dict:
        out: dict = {"size": self.size}
        if self.labels is not None:
            out["labels"] = list(self.labels)
        return out

    @classmethod
    def from_json(cls, data: dict) -> "FiniteSet":
        return cls(int(data["size"]), data.get("labels"))


SetLike = Union[FiniteSet, int]


def as_set(x: SetLike) -> FiniteSet:
    return x if isinstance(x, FiniteSet) else FiniteSet(int(x))


@dataclass(frozen=True)
class FiniteFunction:
    dom: FiniteSet
    cod: FiniteSet
    table: tuple[int, ...]

    def __init__(self, dom: SetLike, cod: SetLike, table: Sequence[int]):
        dom, cod = as_set(dom), as_set(cod)
        table = tuple(int(x) for x in table)
        if len(table) != dom.size:
            raise ValueError(f"table has length {len(table)}, domain has size {dom.size}")
        for x in table:
            if not 0 <= x < cod.size:
                raise ValueError(f"table entry {x} outside codomain of size {cod.size}")
        object.__setattr__(self, "dom", dom)
        object.__setattr__(self, "cod", cod)
        object.__setattr__(self, "table", table)

    def __call__(self, x: int) -> int:
        return self.table[x]

    def __repr__(self) -> str:
        return f"FiniteFunction({self.dom.size}->{self.cod.size}, {list(self.table)})"

    @classmethod
    def from_callable(cls, dom: SetLike, cod: SetLike, fn: Callable[[int], int]) -> "FiniteFunction":
        dom = as_set(dom)
        return cls(dom, cod, [fn(x) for x in range(dom.size)])

    def then(self, g: "FiniteFunction") -> "FiniteFunction":
        """Diagrammatic composite ``self ; g``."""
        return compose(self, g)

    def is_bijection(self) -> bool:
        return self.dom.size == self.cod.size and len(set(self.table)) == self.dom.size

    def inverse(self) -> "FiniteFunction":
        if not self.is_bijection():
            raise ValueError("only bijections have inverses")
        inv = [0] * self.dom.size
        for x, y in enumerate(self.table):
            inv[y] = x
        return FiniteFunction(self.cod, self.dom, inv)

    def to_json(self) -> dict:
        return {"dom": self.dom.size, "cod": self.cod.size, "table": list(self.table)}

    @classmethod
    def from_json(cls, data: dict) -> "FiniteFunction":
        return cls(int(data["dom"]), int(data["cod"]), data["table"])


def identity(n: SetLike) -> FiniteFunction:
    n = as_set(n)
    return FiniteFunction(n, n, range(n.size))


def compose(f: FiniteFunction, g: FiniteFunction) -> FiniteFunction:
    """The composite ``g . f`` (apply ``f`` first)."""
    if f.cod.size != g.dom.size:
        raise DomainMismatch(f"cannot compose {f.dom.size}->{f.cod.size} with {g.dom.size}->{g.cod.size}")
    gt = g.table
    return FiniteFunction(f.dom, g.cod, [gt[y] for y in f.table])


def equal_fn(f: FiniteFunction, g: FiniteFunction) -> bool:
    return (f.dom.size == g.dom.size and f.cod.size == g.cod.size
            and f.table == g.table)


def exp_encode(values: Sequence[int], base: int) -> int:
    """Encode a function ``a -> values[a]`` into ``base^len(values)``."""
    code, scale = 0, 1
    for v in values:
        code += v * scale
        scale *= base
    return code


def exp_decode(code: int, base: int, length: int) -> tuple[int, ...]:
    out = []
    for _ in range(length):
        code, v = divmod(code, base) if base else (code, 0)
        out.append(v)
    return tuple(out)


def product_map(f: FiniteFunction, g: FiniteFunction) -> FiniteFunction:
    """``f x g`` on the canonical product encodings."""
    nb, nd = g.dom.size, g.cod.size
    table = [f.table[a] * nd + g.table[b] for a in range(f.dom.size) for b in range(nb)]
    return FiniteFunction(f.dom.size * nb, f.cod.size * nd, table)


def coproduct_map(f: FiniteFunction, g: FiniteFunction) -> FiniteFunction:
    """``f + g`` on the canonical coproduct encodings."""
    shift = f.cod.size
    table = list(f.table) + [shift + y for y in g.table]
    return FiniteFunction(f.dom.size + g.dom.size, f.cod.size + g.cod.size, table)


class StructuredObject:
    """A product, coproduct, exponential or unit object with its mediators."""

    KINDS = ("product", "coproduct", "exponential", "unit")

    def __init__(self, kind: str, A: SetLike = 0, B: SetLike = 0, cap: int | None = None):
        if kind not in self.KINDS:
            raise ValueError(f"unknown kind {kind!r}")
        self.kind = kind
        self.A, self.B = as_set(A), as_set(B)
        a, b = self.A.size, self.B.size
        size = {"product": a * b, "coproduct": a + b,
                "exponential": b ** a, "unit": 1}[kind]
        check_cap(size, default_caps().carrier if cap is None else cap, f"{kind} carrier")
        self.carrier = FiniteSet(size)

    def __repr__(self) -> str:
        return f"StructuredObject({self.kind}, {self.A.size}, {self.B.size})"

    def _need(self, kind: str) -> None:
        if self.kind != kind:
            raise TypeError(f"{kind} mediator requested on a {self.kind} object")

    # product
    def pair(self, a: int, b: int) -> int:
        self._need("product")
        return a * self.B.size + b

    def unpair(self, c: int) -> tuple[int, int]:
        self._need("product")
        return divmod(c, self.B.size)

    @property
    def proj1(self) -> FiniteFunction:
        self._need("product")
        return FiniteFunction(self.carrier, self.A, [c // self.B.size for c in self.carrier])

    @property
    def proj2(self) -> FiniteFunction:
        self._need("product")
        return FiniteFunction(self.carrier, self.B, [c % self.B.size for c in self.carrier])

    def pairing(self, f: FiniteFunction, g: FiniteFunction) -> FiniteFunction:
        self._need("product")
        if f.dom.size != g.dom.size or f.cod.size != self.A.size or g.cod.size != self.B.size:
            raise DomainMismatch("pairing legs do not match the product")
        return FiniteFunction(f.dom, self.carrier, [self.pair(f(x), g(x)) for x in f.dom])

    # coproduct
    @property
    def inl(self) -> FiniteFunction:
        self._need("coproduct")
        return FiniteFunction(self.A, self.carrier, range(self.A.size))

    @property
    def inr(self) -> FiniteFunction:
        self._need("coproduct")
        return FiniteFunction(self.B, self.carrier, [self.A.size + b for b in self.B])

    def case(self, c: int) -> tuple[int, int]:
        """``(0, a)`` for ``inl(a)`` and ``(1, b)`` for ``inr(b)``."""
        self._need("coproduct")
        return (0, c) if c < self.A.size else (1, c - self.A.size)

    def copair(self, f: FiniteFunction, g: FiniteFunction) -> FiniteFunction:
        self._need("coproduct")
        if f.dom.size != self.A.size or g.dom.size != self.B.size or f.cod.size != g.cod.size:
            raise DomainMismatch("copairing legs do not match the coproduct")
        return FiniteFunction(self.carrier, f.cod, list(f.table) + list(g.table))

    # exponential B^A
    def encode(self, values: Sequence[int]) -> int:
        self._need("exponential")
        return exp_encode(values, self.B.size)

    def decode(self, code: int) -> tuple[int, ...]:
        self._need("exponential")
        return exp_decode(code, self.B.size, self.A.size)

    @property
    def eval(self) -> FiniteFunction:
        """``ev : B^A x A -> B``."""
        self._need("exponential")
        a = self.A.size
        table = [self.decode(h)[x] for h in self.carrier for x in range(a)]
        return FiniteFunction(self.carrier.size * a, self.B, table)

    def curry(self, h: FiniteFunction, X: SetLike) -> FiniteFunction:
        """Transpose ``h : X x A -> B`` to ``X -> B^A``."""
        self._need("exponential")
        X, a = as_set(X), self.A.size
        if h.dom.size != X.size * a or h.cod.size != self.B.size:
            raise DomainMismatch("curry expects a map X x A -> B")
        return FiniteFunction(X, self.carrier,
                              [self.encode([h(x * a + y) for y in range(a)]) for x in X])

    def check_mediators(self) -> bool:
        """Exhaustively verify the universal equations of this object."""
        if self.kind == "product":
            A, B, X = self.A, self.B, FiniteSet(2)
            for f in enumerate_functions(X, A):
                for g in enumerate_functions(X, B):
                    p = self.pairing(f, g)
                    if compose(p, self.proj1) != f or compose(p, self.proj2) != g:
                        return False
            return all(self.pair(*self.unpair(c)) == c for c in self.carrier)
        if self.kind == "coproduct":
            C = FiniteSet(2)
            for f in enumerate_functions(self.A, C):
                for g in enumerate_functions(self.B, C):
                    h = self.copair(f, g)
                    if compose(self.inl, h) != f or compose(self.inr, h) != g:
                        return False
            return sorted(self.inl.table + self.inr.table) == list(self.carrier)
        if self.kind == "exponential":
            a = self.A.size
            X = FiniteSet(2)
            ev = self.eval
            for h in enumerate_functions(X.size * a, self.B):
                c = self.curry(h, X)
                back = [ev(c(x) * a + y) for x in X for y in range(a)]
                if tuple(back) != h.table:
                    return False
            return all(self.encode(self.decode(h)) == h for h in self.carrier)
        return self.carrier.size == 1


def build_structured(kind: str, A: SetLike = 0, B: SetLike = 0, cap: int | None = None) -> StructuredObject:
    return StructuredObject(kind, A, B, cap)


def count_functions(A: SetLike, B: SetLike) -> int:
    return as_set(B).size ** as_set(A).size


def enumerate_functions(A: SetLike, B: SetLike, cap: int | None = None) -> Iterator[FiniteFunction]:
    """All functions ``A -> B`` in lexicographic table order."""
    A, B = as_set(A), as_set(B)
    check_cap(count_functions(A, B), default_caps().carrier if cap is None else cap, "hom-set")
    for table in itertools.product(range(B.size), repeat=A.size):
        yield FiniteFunction(A, B, table)
