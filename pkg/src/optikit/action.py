"""Monoidal actions of a residual category on finite sets.

An action fixes how a residual ``M`` acts on an object ``X`` (the carrier
``M.X``), how residual morphisms act (``phi.X : M.X -> N.X``), the tensor of
residuals together with the mediator ``(M (x) N).X ~ M.(N.X)``, and the unitor
``I.X ~ X``.  Homs of the acted-on category are tables ``X -> T(Y)`` where
``T`` is the identity monad for plain actions and a writer or state monad for
the Kleisli instances; this keeps one code path for all eight actions.

Residuals are tuples of sizes: ``(m,)`` for single-set residuals, ``(p, q)``
for affine, ``()`` for the trivial action.  A residual morphism is a table
(a tuple of ints) or, for affine, a pair of tables.  Grate residuals live in
the opposite category: a morphism ``M -> N`` is stored as the table of the
underlying map ``N -> M``.
"""
from __future__ import annotations

import itertools
from typing import Iterable, Iterator, Sequence

from .caps import check_cap, default_caps
from .errors import DomainMismatch, InvalidMonoid, UnsupportedAction
from .finset import FiniteFunction, FiniteSet, exp_decode, exp_encode

Residual = tuple
Table = list

__all__ = [
    "Monad", "IdentityMonad", "WriterMonad", "StateMonad",
    "Action", "ProductAction", "CoproductAction", "TrivialAction",
    "AffineAction", "AchromaticAction", "GrateAction", "WriterAction",
    "StateAction", "make_action", "ACTION_NAMES", "finset_generators",
    "act_object", "act_morphism", "residual_tensor", "enumerate_residuals",
]


# ---------------------------------------------------------------- monads

class Monad:
    """A finitary monad on finite sets, given on codes."""

    name = "identity"

    def size(self, n: int) -> int:
        raise NotImplementedError

    def eta(self, n: int) -> Table:
        raise NotImplementedError

    def fmap(self, f: Sequence[int], n: int, m: int) -> Table:
        raise NotImplementedError

    def kleisli(self, f: Sequence[int], g: Sequence[int], ny: int, nz: int) -> Table:
        """``g <=< f`` for ``f : X -> T ny`` and ``g : ny -> T nz``."""
        raise NotImplementedError

    def strength(self, m: int, n: int) -> Table:
        """``theta : m x T n -> T(m x n)``."""
        raise NotImplementedError

    def support(self, code: int, n: int) -> list[int]:
        """Elements of ``n`` occurring in a code of ``T n``."""
        raise NotImplementedError


class IdentityMonad(Monad):
    name = "identity"

    def size(self, n: int) -> int:
        return n

    def eta(self, n: int) -> Table:
        return list(range(n))

    def fmap(self, f, n, m):
        return list(f)

    def kleisli(self, f, g, ny, nz):
        return [g[y] for y in f]

    def strength(self, m, n):
        return list(range(m * n))

    def support(self, code, n):
        return [code]


class WriterMonad(Monad):
    """``T X = X x W`` for a finite monoid ``W`` given by its table."""

    name = "writer"

    def __init__(self, table: Sequence[Sequence[int]]):
        w = len(table)
        mul = [[int(x) for x in row] for row in table]
        if w == 0 or any(len(row) != w for row in mul):
            raise InvalidMonoid("monoid table must be a non-empty square")
        if any(not 0 <= x < w for row in mul for x in row):
            raise InvalidMonoid("monoid table entries out of range")
        for a, b, c in itertools.product(range(w), repeat=3):
            if mul[mul[a][b]][c] != mul[a][mul[b][c]]:
                raise InvalidMonoid(f"not associative at {(a, b, c)}")
        units = [e for e in range(w) if all(mul[e][x] == x == mul[x][e] for x in range(w))]
        if not units:
            raise InvalidMonoid("no two-sided unit")
        self.w, self.mul, self.unit = w, mul, units[0]

    def size(self, n):
        return n * self.w

    def eta(self, n):
        return [y * self.w + self.unit for y in range(n)]

    def fmap(self, f, n, m):
        w = self.w
        return [f[c // w] * w + c % w for c in range(n * w)]

    def kleisli(self, f, g, ny, nz):
        w, mul = self.w, self.mul
        out = []
        for c in f:
            y, v = divmod(c, w)
            z, u = divmod(g[y], w)
            out.append(z * w + mul[v][u])
        return out

    def strength(self, m, n):
        w = self.w
        return [((i * n) + c // w) * w + c % w for i in range(m) for c in range(n * w)]

    def support(self, code, n):
        return [code // self.w]


class StateMonad(Monad):
    """``T X = (X x Q)^Q``; a code is the exponential encoding of ``q -> (x, q')``."""

    name = "state"

    def __init__(self, q: int):
        if q < 1:
            raise ValueError("state set must be non-empty")
        self.q = q

    def size(self, n):
        return (n * self.q) ** self.q

    def decode(self, code: int, n: int) -> list[tuple[int, int]]:
        q = self.q
        return [divmod(c, q) for c in exp_decode(code, n * q, q)]

    def encode(self, pairs: Sequence[tuple[int, int]], n: int) -> int:
        q = self.q
        return exp_encode([x * q + s for x, s in pairs], n * q)

    def eta(self, n):
        return [self.encode([(y, s) for s in range(self.q)], n) for y in range(n)]

    def fmap(self, f, n, m):
        return [self.encode([(f[y], s) for y, s in self.decode(c, n)], m)
                for c in range(self.size(n))]

    def kleisli(self, f, g, ny, nz):
        gdec = [self.decode(c, nz) for c in g]
        out = []
        for c in f:
            steps = self.decode(c, ny)
            out.append(self.encode([gdec[y][s1] for y, s1 in steps], nz))
        return out

    def strength(self, m, n):
        out = []
        for i in range(m):
            for c in range(self.size(n)):
                out.append(self.encode([(i * n + y, s) for y, s in self.decode(c, n)], m * n))
        return out

    def support(self, code, n):
        return [y for y, _ in self.decode(code, n)]

    def run(self, code: int, n: int, s: int) -> tuple[int, int]:
        return self.decode(code, n)[s]


# ------------------------------------------------------------- residuals

def finset_generators(bound: int) -> list[tuple[int, int, tuple[int, ...]]]:
    """Maps that generate every function between sets of size <= bound.

    Each function factors as a surjection followed by an injection, and both
    factor through swaps, cycles, merges of the last two points and
    inclusions, with every intermediate object inside the bound.
    """
    gens = []
    for n in range(2, bound + 1):
        gens.append((n, n, (1, 0) + tuple(range(2, n))))
        if n >= 3:
            gens.append((n, n, tuple(range(1, n)) + (0,)))
        gens.append((n, n - 1, tuple(range(n - 1)) + (n - 2,)))
    for n in range(bound):
        gens.append((n, n + 1, tuple(range(n))))
    return gens


def _functions(a: int, b: int) -> Iterator[tuple[int, ...]]:
    return itertools.product(range(b), repeat=a)


class Action:
    """Base class; subclasses fill in the structure maps."""

    name = "abstract"
    monad: Monad = IdentityMonad()
    contravariant = False

    # identification ---------------------------------------------------
    @property
    def key(self) -> tuple:
        return (self.name,)

    def __repr__(self) -> str:
        return f"{type(self).__name__}()"

    def __eq__(self, other) -> bool:
        return isinstance(other, Action) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    # residual category ------------------------------------------------
    unit: Residual = (1,)

    def residuals(self, bound: int) -> list[Residual]:
        return [(m,) for m in range(bound + 1)]

    def residual_weight(self, M: Residual) -> tuple:
        return (sum(M), M)

    def morphisms(self, M: Residual, N: Residual) -> Iterator:
        return _functions(M[0], N[0])

    def res_identity(self, M: Residual):
        return tuple(range(M[0]))

    def res_compose(self, phi, psi):
        """``psi . phi`` for ``phi : M -> N`` and ``psi : N -> K``."""
        return tuple(psi[x] for x in phi)

    def generators(self, bound: int) -> list[tuple[Residual, Residual, object]]:
        return [((a,), (b,), t) for a, b, t in finset_generators(bound)]

    # the action on objects and maps -----------------------------------
    def act_size(self, M: Residual, n: int) -> int:
        raise NotImplementedError

    def act_fn(self, M: Residual, f: Sequence[int], n: int, m: int) -> Table:
        """``M.f : M.n -> M.m`` for a plain function ``f : n -> m``."""
        raise NotImplementedError

    def res_fn(self, phi, M: Residual, N: Residual, n: int) -> Table:
        """``phi.n : M.n -> N.n`` (a plain function)."""
        raise NotImplementedError

    def tensor(self, M: Residual, N: Residual) -> Residual:
        raise NotImplementedError

    def mediator(self, M: Residual, N: Residual, n: int) -> Table:
        """Bijection ``(M (x) N).n -> M.(N.n)``."""
        raise NotImplementedError

    def unitor(self, n: int) -> Table:
        """Bijection ``I.n -> n``."""
        return list(range(n))

    def associator(self, M: Residual, N: Residual, K: Residual):
        """Residual iso ``(M (x) N) (x) K -> M (x) (N (x) K)``; identity when strict."""
        return self.res_identity(self.tensor(self.tensor(M, N), K))

    def residual_support(self, M: Residual, n: int, c: int) -> list:
        """Residual points used by the element ``c`` of ``M.n``."""
        raise NotImplementedError

    def reduce_size(self, S: int, A: int) -> int:
        """A residual size that every representative can be slid down to."""
        return S

    # homs of the acted-on category ------------------------------------
    def hom_size(self, n: int) -> int:
        return self.monad.size(n)

    def hom_compose(self, f: Sequence[int], g: Sequence[int], ny: int, nz: int) -> Table:
        """``g . f`` in the hom category (``f : x -> ny``, ``g : ny -> nz``)."""
        return self.monad.kleisli(f, g, ny, nz)

    def hom_identity(self, n: int) -> Table:
        return self.monad.eta(n)

    def pure(self, f: Sequence[int], m: int) -> Table:
        eta = self.monad.eta(m)
        return [eta[y] for y in f]

    def post(self, h: Sequence[int], f: Sequence[int], n: int, m: int) -> Table:
        """``T(h) . f`` for a plain ``h : n -> m``."""
        th = self.monad.fmap(h, n, m)
        return [th[c] for c in f]

    def act_hom(self, M: Residual, g: Sequence[int], nx: int, ny: int) -> Table:
        """``M.g`` for a hom ``g : nx -> T ny``."""
        if isinstance(self.monad, IdentityMonad):
            return self.act_fn(M, g, nx, ny)
        raise NotImplementedError

    # reduction --------------------------------------------------------
    def shrink(self, M: Residual, n: int, codes: Iterable[int]):
        """Find ``phi : K -> M`` whose action covers every hom code given.

        Returns ``(K, phi)`` such that each code of ``T(M.n)`` lies in the
        image of ``T(phi.n)``; ``phi.n`` is injective so the lift is unique.
        """
        used: set[int] = set()
        for c in codes:
            for x in self.monad.support(c, self.act_size(M, n)):
                used.update(self.residual_support(M, n, x))
        keep = tuple(sorted(used))
        return (len(keep),), keep


class ProductAction(Action):
    """``M.X = M x X``; optics for this action are lenses."""

    name = "lens"
    unit = (1,)

    def act_size(self, M, n):
        return M[0] * n

    def act_fn(self, M, f, n, m):
        return [i * m + f[x] for i in range(M[0]) for x in range(n)]

    def res_fn(self, phi, M, N, n):
        return [phi[i] * n + x for i in range(M[0]) for x in range(n)]

    def tensor(self, M, N):
        return (M[0] * N[0],)

    def mediator(self, M, N, n):
        return list(range(M[0] * N[0] * n))

    def residual_support(self, M, n, c):
        return [c // n] if n else []

    def act_hom(self, M, g, nx, ny):
        if isinstance(self.monad, IdentityMonad):
            return self.act_fn(M, g, nx, ny)
        th = self.monad.strength(M[0], ny)
        t = self.monad.size(ny)
        return [th[i * t + g[x]] for i in range(M[0]) for x in range(nx)]


class CoproductAction(Action):
    """``M.X = M + X``; optics for this action are prisms."""

    name = "prism"
    unit = (0,)

    def act_size(self, M, n):
        return M[0] + n

    def act_fn(self, M, f, n, m):
        return list(range(M[0])) + [M[0] + f[x] for x in range(n)]

    def res_fn(self, phi, M, N, n):
        return list(phi) + [N[0] + x for x in range(n)]

    def tensor(self, M, N):
        return (M[0] + N[0],)

    def mediator(self, M, N, n):
        return list(range(M[0] + N[0] + n))

    def residual_support(self, M, n, c):
        return [c] if c < M[0] else []


class TrivialAction(Action):
    """The trivial monoidal category acting by the identity; optics are isos."""

    name = "iso"
    unit = ()

    def residuals(self, bound):
        return [()]

    def morphisms(self, M, N):
        return iter([()])

    def res_identity(self, M):
        return ()

    def res_compose(self, phi, psi):
        return ()

    def generators(self, bound):
        return []

    def act_size(self, M, n):
        return n

    def act_fn(self, M, f, n, m):
        return list(f)

    def res_fn(self, phi, M, N, n):
        return list(range(n))

    def tensor(self, M, N):
        return ()

    def mediator(self, M, N, n):
        return list(range(n))

    def residual_support(self, M, n, c):
        return []

    def shrink(self, M, n, codes):
        return (), ()

    def reduce_size(self, S, A):
        return 0


class AffineAction(Action):
    """``(P, Q).X = P + Q x X`` with ``(P', Q') (x) (P, Q) = (P' + Q' x P, Q' x Q)``."""

    name = "affine"
    unit = (0, 1)

    def residuals(self, bound):
        return [(p, q) for p in range(bound + 1) for q in range(bound + 1)]

    def morphisms(self, M, N):
        return itertools.product(_functions(M[0], N[0]), _functions(M[1], N[1]))

    def res_identity(self, M):
        return (tuple(range(M[0])), tuple(range(M[1])))

    def res_compose(self, phi, psi):
        return (tuple(psi[0][x] for x in phi[0]), tuple(psi[1][x] for x in phi[1]))

    def generators(self, bound):
        out = []
        for a, b, t in finset_generators(bound):
            for q in range(bound + 1):
                out.append(((a, q), (b, q), (t, tuple(range(q)))))
            for p in range(bound + 1):
                out.append(((p, a), (p, b), (tuple(range(p)), t)))
        return out

    def act_size(self, M, n):
        return M[0] + M[1] * n

    def act_fn(self, M, f, n, m):
        p, q = M
        return list(range(p)) + [p + j * m + f[x] for j in range(q) for x in range(n)]

    def res_fn(self, phi, M, N, n):
        f, g = phi
        return list(f) + [N[0] + g[j] * n + x for j in range(M[1]) for x in range(n)]

    def tensor(self, M, N):
        (p2, q2), (p, q) = M, N
        return (p2 + q2 * p, q2 * q)

    def mediator(self, M, N, n):
        (p2, q2), (p, q) = M, N
        inner = p + q * n
        out = list(range(p2))
        out += [p2 + j2 * inner + i for j2 in range(q2) for i in range(p)]
        out += [p2 + j2 * inner + p + j * n + x
                for j2 in range(q2) for j in range(q) for x in range(n)]
        return out

    def associator(self, M, N, K):
        (p3, q3), (p2, q2), (p, q) = M, N, K
        inner = p2 + q2 * p
        f = list(range(p3))
        f += [p3 + j3 * inner + y for j3 in range(q3) for y in range(p2)]
        f += [p3 + j3 * inner + p2 + j2 * p + i
              for j3 in range(q3) for j2 in range(q2) for i in range(p)]
        return (tuple(f), tuple(range(q3 * q2 * q)))

    def residual_support(self, M, n, c):
        p = M[0]
        if c < p:
            return [("P", c)]
        return [("Q", (c - p) // n)]

    def shrink(self, M, n, codes):
        used = set()
        for c in codes:
            used.update(self.residual_support(M, n, c))
        ps = tuple(sorted(i for tag, i in used if tag == "P"))
        qs = tuple(sorted(j for tag, j in used if tag == "Q"))
        return (len(ps), len(qs)), (ps, qs)

    def residual_weight(self, M):
        return (sum(M), M)


class AchromaticAction(Action):
    """``M.X = (M + 1) x X``; the tensor is ``M x N + M + N`` with unit ``0``.

    The extra point of ``M + 1`` is encoded as the last index ``m``.
    """

    name = "achromatic"
    unit = (0,)

    def act_size(self, M, n):
        return (M[0] + 1) * n

    def act_fn(self, M, f, n, m):
        return [i * m + f[x] for i in range(M[0] + 1) for x in range(n)]

    def res_fn(self, phi, M, N, n):
        ext = list(phi) + [N[0]]
        return [ext[i] * n + x for i in range(M[0] + 1) for x in range(n)]

    def tensor(self, M, N):
        return ((M[0] + 1) * (N[0] + 1) - 1,)

    def mediator(self, M, N, n):
        return list(range((M[0] + 1) * (N[0] + 1) * n))

    def residual_support(self, M, n, c):
        i = c // n if n else M[0]
        return [i] if i < M[0] else []

    def reduce_size(self, S, A):
        return S


class GrateAction(Action):
    """The contravariant action ``M.X = X^M``.

    A residual morphism ``M -> N`` is a map ``N -> M`` of sets, stored as its
    table; it acts on ``X^M -> X^N`` by precomposition.
    """

    name = "grate"
    unit = (1,)
    contravariant = True

    def morphisms(self, M, N):
        return _functions(N[0], M[0])

    def res_compose(self, phi, psi):
        # phi : M -> N is a map N -> M, psi : N -> K is a map K -> N
        return tuple(phi[k] for k in psi)

    def generators(self, bound):
        return [((b,), (a,), t) for a, b, t in finset_generators(bound)]

    def act_size(self, M, n):
        return n ** M[0]

    def act_fn(self, M, f, n, m):
        k = M[0]
        return [exp_encode([f[v] for v in exp_decode(h, n, k)], m) for h in range(n ** k)]

    def res_fn(self, phi, M, N, n):
        k = M[0]
        out = []
        for h in range(n ** k):
            vals = exp_decode(h, n, k)
            out.append(exp_encode([vals[phi[j]] for j in range(N[0])], n))
        return out

    def tensor(self, M, N):
        return (M[0] * N[0],)

    def mediator(self, M, N, n):
        # h : M x N -> X, pair (i, j) at index i * |N| + j, equals the curried code
        return list(range(n ** (M[0] * N[0])))

    def residual_support(self, M, n, c):
        raise NotImplementedError

    def shrink(self, M, n, codes):
        k = M[0]
        rows = [exp_decode(c, n, k) for c in codes]
        classes: dict[tuple, int] = {}
        quotient = []
        for i in range(k):
            column = tuple(r[i] for r in rows)
            quotient.append(classes.setdefault(column, len(classes)))
        # phi : K -> M in the residual category is the quotient map M -> K
        return (len(classes),), tuple(quotient)

    def reduce_size(self, S, A):
        return A ** S


class WriterAction(ProductAction):
    """Pure residuals acting on the Kleisli category of ``T X = X x W``."""

    name = "writer"

    def __init__(self, monoid_table: Sequence[Sequence[int]]):
        self.monad = WriterMonad(monoid_table)

    @property
    def key(self):
        return (self.name, tuple(tuple(r) for r in self.monad.mul))

    def residual_support(self, M, n, c):
        return [c // n] if n else []


class StateAction(ProductAction):
    """Pure residuals acting on the Kleisli category of ``T X = (X x Q)^Q``."""

    name = "state"

    def __init__(self, q: int):
        self.monad = StateMonad(q)

    @property
    def key(self):
        return (self.name, self.monad.q)

    def reduce_size(self, S, A):
        return S * self.monad.q


ACTION_NAMES = ("lens", "prism", "iso", "affine", "achromatic", "writer", "state", "grate")

DEFAULT_MONOID = ((0, 1), (1, 0))  # Z/2


def make_action(name: str, monoid_table: Sequence[Sequence[int]] | None = None,
                state_size: int | None = None) -> Action:
    if name == "lens":
        return ProductAction()
    if name == "prism":
        return CoproductAction()
    if name == "iso":
        return TrivialAction()
    if name == "affine":
        return AffineAction()
    if name == "achromatic":
        return AchromaticAction()
    if name == "grate":
        return GrateAction()
    if name == "writer":
        return WriterAction(monoid_table if monoid_table is not None else DEFAULT_MONOID)
    if name == "state":
        return StateAction(state_size if state_size is not None else 2)
    raise UnsupportedAction(f"unknown action {name!r}")


# ------------------------------------------------- table-level operations

def act_object(act: Action, M: Residual, A: int) -> FiniteSet:
    size = act.act_size(M, A)
    check_cap(size, default_caps().carrier, "action carrier")
    return FiniteSet(size)


def act_morphism(act: Action, phi, M: Residual, N: Residual, A: int) -> FiniteFunction:
    """``phi.A : M.A -> N.A`` as a hom of the acted-on category."""
    if act.contravariant:
        ok = len(phi) == N[0] and all(0 <= x < M[0] for x in phi)
    elif isinstance(act, AffineAction):
        ok = (len(phi[0]) == M[0] and len(phi[1]) == M[1]
              and all(0 <= x < N[0] for x in phi[0]) and all(0 <= x < N[1] for x in phi[1]))
    elif isinstance(act, TrivialAction):
        ok = True
    else:
        ok = len(phi) == M[0] and all(0 <= x < N[0] for x in phi)
    if not ok:
        raise DomainMismatch(f"{phi!r} is not a residual morphism {M} -> {N}")
    plain = act.res_fn(phi, M, N, A)
    n = act.act_size(N, A)
    return FiniteFunction(act.act_size(M, A), act.hom_size(n), act.pure(plain, n))


def residual_tensor(act: Action, M: Residual, N: Residual, A: int) -> tuple[Residual, FiniteFunction]:
    """``M (x) N`` and the mediator ``(M (x) N).A -> M.(N.A)``."""
    MN = act.tensor(M, N)
    med = act.mediator(M, N, A)
    size = act.act_size(MN, A)
    check_cap(size, default_caps().carrier, "action carrier")
    return MN, FiniteFunction(size, act.act_size(M, act.act_size(N, A)), med)


def enumerate_residuals(act: Action, bound: int) -> list[Residual]:
    if bound < 1:
        raise ValueError("bound must be at least 1")
    return act.residuals(bound)
