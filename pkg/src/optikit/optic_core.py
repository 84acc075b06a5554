"""Existential optics over finite sets and the bounded coend quotient.

A representative ``<l|r>`` has a residual ``M``, a hom ``l : S -> M.A`` and a
hom ``r : M.A' -> S'``.  Both legs are stored as code tables: entries of
``T(M.A)`` and ``T(S')`` where ``T`` is the monad of the action (the identity
for plain actions).  An optic is a class of the relation generated by sliding
a residual morphism ``phi : M -> N`` across the pair::

    <(phi.A) l | r>  ~  <l | r (phi.A')>

``build_quotient`` enumerates every representative whose residual lies inside
a bound and merges along a generating set of residual morphisms with a
union-find over numpy arrays.  Generators suffice: sliding along a composite
is a chain of slides along its factors.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator, Sequence

import numpy as np

from .action import Action, IdentityMonad, ProductAction
from .caps import Caps, check_cap, default_caps
from .errors import (AuditFailure, DomainMismatch, InvalidFunctor, NotDualisable,
                     OutOfTable, SignatureMismatch, UnsupportedAction)
from .finset import FiniteFunction, FiniteSet

__all__ = [
    "OpticSignature", "Representative", "OpticTable", "make_rep",
    "default_bound", "build_quotient", "get_table", "clear_cache", "class_of",
    "classify", "same_class", "reduce_rep", "identity_optic", "compose_optics",
    "iota", "tensor_optics", "switched_tensor_optics", "symmetry",
    "costate_to_morphism", "morphism_to_costate", "connector", "state_count",
    "dual", "counit", "decompose_composite", "decompose_check",
    "MonoidalFunctor", "identity_functor", "diagonal_functor", "map_optic",
    "swap_table", "invert_table", "extranaturality_square", "counit_symmetry_square",
    "counit_monoidal_square", "teleological_checks",
]


# ------------------------------------------------------------------ types

def _size(x) -> int:
    return x.size if isinstance(x, FiniteSet) else int(x)


@dataclass(frozen=True)
class OpticSignature:
    """Sizes of ``(S, S')`` and ``(A, A')``; ``p`` stands for prime."""

    S: int
    Sp: int
    A: int
    Ap: int

    def __post_init__(self) -> None:
        for name in ("S", "Sp", "A", "Ap"):
            v = _size(getattr(self, name))
            if v < 0:
                raise ValueError("sizes must be non-negative")
            object.__setattr__(self, name, v)

    @property
    def sizes(self) -> tuple[int, int, int, int]:
        return (self.S, self.Sp, self.A, self.Ap)

    @property
    def unprimed(self) -> bool:
        return self.S == self.Sp and self.A == self.Ap

    def to_json(self) -> list[int]:
        return list(self.sizes)

    @classmethod
    def from_json(cls, data) -> "OpticSignature":
        if isinstance(data, dict):
            return cls(data["S"], data["Sp"], data["A"], data["Ap"])
        return cls(*data)


@dataclass(frozen=True)
class Representative:
    """``<l|r>`` with explicit residual ``M``; legs are code tables."""

    sig: OpticSignature
    M: tuple
    l: tuple[int, ...]
    r: tuple[int, ...]

    def to_json(self) -> dict:
        return {"sig": self.sig.to_json(), "M": list(self.M),
                "l": list(self.l), "r": list(self.r)}

    @classmethod
    def from_json(cls, data: dict) -> "Representative":
        return cls(OpticSignature.from_json(data["sig"]), tuple(data["M"]),
                   tuple(data["l"]), tuple(data["r"]))

    def l_fn(self, act: Action) -> FiniteFunction:
        n = act.act_size(self.M, self.sig.A)
        return FiniteFunction(self.sig.S, act.hom_size(n), self.l)

    def r_fn(self, act: Action) -> FiniteFunction:
        return FiniteFunction(act.act_size(self.M, self.sig.Ap), act.hom_size(self.sig.Sp), self.r)


def make_rep(act: Action, sig: OpticSignature, M, l: Sequence[int], r: Sequence[int]) -> Representative:
    """Build a representative after checking both legs against the action."""
    M = tuple(M)
    l, r = tuple(int(x) for x in l), tuple(int(x) for x in r)
    lcod = act.hom_size(act.act_size(M, sig.A))
    rdom, rcod = act.act_size(M, sig.Ap), act.hom_size(sig.Sp)
    if len(l) != sig.S or any(not 0 <= x < lcod for x in l):
        raise DomainMismatch(f"l does not typecheck as {sig.S} -> T({M}.{sig.A})")
    if len(r) != rdom or any(not 0 <= x < rcod for x in r):
        raise DomainMismatch(f"r does not typecheck as {M}.{sig.Ap} -> T({sig.Sp})")
    return Representative(sig, M, l, r)


def invert_table(t: Sequence[int]) -> list[int]:
    inv = [0] * len(t)
    for i, y in enumerate(t):
        inv[y] = i
    return inv


def swap_table(a: int, b: int) -> list[int]:
    """The symmetry ``a x b -> b x a`` on product codes."""
    return [y * a + x for x in range(a) for y in range(b)]


# -------------------------------------------------------- index encodings

def _digits(length: int, base: int) -> np.ndarray:
    """All tables ``length -> base`` in lexicographic order, one per row."""
    count = base ** length
    idx = np.arange(count, dtype=np.int64)
    if length == 0:
        return np.zeros((count, 0), dtype=np.int64)
    powers = base ** np.arange(length - 1, -1, -1, dtype=np.int64)
    return (idx[:, None] // powers[None, :]) % base


def _lex(rows: np.ndarray, base: int) -> np.ndarray:
    length = rows.shape[1]
    if length == 0:
        return np.zeros(rows.shape[0], dtype=np.int64)
    powers = base ** np.arange(length - 1, -1, -1, dtype=np.int64)
    return rows @ powers


def _lex_one(table: Sequence[int], base: int) -> int:
    out = 0
    for x in table:
        out = out * base + x
    return out


def _unlex(index: int, base: int, length: int) -> tuple[int, ...]:
    out = [0] * length
    for i in range(length - 1, -1, -1):
        index, out[i] = divmod(index, base)
    return tuple(out)


class UnionFind:
    """Array-backed union-find; roots are always the least member."""

    def __init__(self, n: int):
        self.parent = np.arange(n, dtype=np.int64)

    def roots(self, x: np.ndarray) -> np.ndarray:
        p = self.parent
        r = p[x]
        while True:
            rr = p[r]
            if np.array_equal(rr, r):
                return r
            r = rr

    def union(self, u: np.ndarray, v: np.ndarray) -> None:
        p = self.parent
        u = np.asarray(u, dtype=np.int64).ravel()
        v = np.asarray(v, dtype=np.int64).ravel()
        while u.size:
            ru, rv = self.roots(u), self.roots(v)
            keep = ru != rv
            if not keep.any():
                break
            u, v, ru, rv = u[keep], v[keep], ru[keep], rv[keep]
            hi, lo = np.maximum(ru, rv), np.minimum(ru, rv)
            # each root hooks onto the least root it is joined to
            np.minimum.at(p, hi, lo)
        self.flatten()

    def flatten(self) -> np.ndarray:
        p = self.parent
        while True:
            q = p[p]
            if np.array_equal(q, p):
                return p
            p[:] = q


# ------------------------------------------------------------ the table

@dataclass(frozen=True)
class _Block:
    M: tuple
    lcod: int
    nl: int
    rdom: int
    rcod: int
    nr: int
    offset: int

    @property
    def count(self) -> int:
        return self.nl * self.nr


def _blocks(act: Action, sig: OpticSignature, bound: int) -> list[_Block]:
    residuals = sorted(act.residuals(bound), key=act.residual_weight)
    out, offset = [], 0
    rcod = act.hom_size(sig.Sp)
    for M in residuals:
        lcod = act.hom_size(act.act_size(M, sig.A))
        rdom = act.act_size(M, sig.Ap)
        nl, nr = lcod ** sig.S, rcod ** rdom
        out.append(_Block(M, lcod, nl, rdom, rcod, nr, offset))
        offset += nl * nr
    return out


class OpticTable:
    """The classes of representatives with residual inside ``bound``.

    Representatives are indexed block by block (residuals ordered by weight),
    and inside a block by ``l_index * nr + r_index`` with legs encoded as
    lexicographic digits.  Every class is labelled by its least index, which
    is the canonical representative.
    """

    def __init__(self, act: Action, sig: OpticSignature, bound: int,
                 blocks: list[_Block], labels: np.ndarray, canon: np.ndarray,
                 sizes: np.ndarray):
        self.act, self.sig, self.bound = act, sig, bound
        self.blocks = blocks
        self._by_M = {b.M: b for b in blocks}
        self._offsets = np.array([b.offset for b in blocks], dtype=np.int64)
        self.labels = labels
        self.canon_index = canon
        self.class_sizes = sizes
        self.audited = False

    @property
    def count(self) -> int:
        return int(len(self.canon_index))

    def __len__(self) -> int:
        return self.count

    @property
    def n_reps(self) -> int:
        return int(len(self.labels))

    def index_of(self, rep: Representative) -> int:
        if rep.sig != self.sig:
            raise SignatureMismatch(f"{rep.sig} is not the table signature {self.sig}")
        b = self._by_M.get(tuple(rep.M))
        if b is None:
            raise OutOfTable(f"residual {rep.M} lies outside bound {self.bound}")
        return b.offset + _lex_one(rep.l, b.lcod) * b.nr + _lex_one(rep.r, b.rcod)

    def rep_at(self, index: int) -> Representative:
        k = int(np.searchsorted(self._offsets, index, side="right")) - 1
        b = self.blocks[k]
        li, ri = divmod(int(index) - b.offset, b.nr)
        return Representative(self.sig, b.M, _unlex(li, b.lcod, self.sig.S),
                              _unlex(ri, b.rcod, b.rdom))

    def class_of(self, rep: Representative) -> int:
        return int(self.labels[self.index_of(rep)])

    def canon(self, cid: int) -> Representative:
        return self.rep_at(int(self.canon_index[cid]))

    def canons(self) -> list[Representative]:
        return [self.canon(c) for c in range(self.count)]

    def members(self, cid: int) -> Iterator[Representative]:
        for i in np.flatnonzero(self.labels == cid):
            yield self.rep_at(int(i))

    def to_json(self) -> dict:
        return {
            "sig": self.sig.to_json(),
            "action": self.act.name,
            "bound": self.bound,
            "classes": [
                {"id": c, "canon": {k: v for k, v in self.canon(c).to_json().items() if k != "sig"},
                 "size": int(self.class_sizes[c])}
                for c in range(self.count)
            ],
        }


def default_bound(act: Action, sig: OpticSignature) -> int:
    """One more than any residual a representative ever needs to be slid to."""
    return max(sig.S, sig.Sp, 2, act.reduce_size(sig.S, sig.A)) + 1


def _slide_edges(act: Action, sig: OpticSignature, bm: _Block, bn: _Block, phi,
                 chunk: int) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    """Pairs ``(index of <(phi.A) l | r>, index of <l | r (phi.A')>)``."""
    M, N = bm.M, bn.M
    if bm.nl == 0 or bn.nr == 0:
        return
    plain_a = act.res_fn(phi, M, N, sig.A)
    code_map = np.asarray(act.monad.fmap(plain_a, act.act_size(M, sig.A), act.act_size(N, sig.A)),
                          dtype=np.int64)
    lmapped = _lex(code_map[_digits(sig.S, bm.lcod)], bn.lcod)          # (nl_M,)
    plain_ap = np.asarray(act.res_fn(phi, M, N, sig.Ap), dtype=np.int64)
    rrows = _digits(bn.rdom, bn.rcod)
    rmapped = _lex(rrows[:, plain_ap] if plain_ap.size else rrows[:, :0], bn.rcod)  # (nr_N,)
    r_n = np.arange(bn.nr, dtype=np.int64)
    step = max(1, chunk // max(bn.nr, 1))
    for start in range(0, bm.nl, step):
        li = np.arange(start, min(bm.nl, start + step), dtype=np.int64)
        u = bn.offset + lmapped[li][:, None] * bn.nr + r_n[None, :]
        v = bm.offset + li[:, None] * bm.nr + rmapped[None, :]
        yield u, v


def _quotient(act: Action, sig: OpticSignature, bound: int, caps: Caps) -> OpticTable:
    blocks = _blocks(act, sig, bound)
    total = sum(b.count for b in blocks)
    check_cap(total, caps.reps, "representative enumeration")
    by_M = {b.M: b for b in blocks}
    gens = [(M, N, phi) for M, N, phi in act.generators(bound) if M in by_M and N in by_M]
    edges = sum(by_M[M].nl * by_M[N].nr for M, N, _ in gens)
    check_cap(edges, caps.edges, "sliding relation")
    uf = UnionFind(total)
    for M, N, phi in gens:
        for u, v in _slide_edges(act, sig, by_M[M], by_M[N], phi, chunk=1 << 22):
            uf.union(u, v)
    roots = uf.flatten()
    canon, labels, sizes = np.unique(roots, return_inverse=True, return_counts=True)
    return OpticTable(act, sig, bound, blocks, labels.astype(np.int64), canon, sizes)


def audit_table(table: OpticTable, caps: Caps | None = None) -> None:
    """Rebuild at ``bound + 1``; counts must agree and no two classes may merge."""
    caps = caps or default_caps()
    bigger = _quotient(table.act, table.sig, table.bound + 1, caps)
    if bigger.count != table.count:
        raise AuditFailure(f"{table.act.name} {table.sig.sizes}: {table.count} classes at bound "
                           f"{table.bound} but {bigger.count} at bound {table.bound + 1}")
    images = {bigger.class_of(table.canon(c)) for c in range(table.count)}
    if len(images) != table.count:
        raise AuditFailure(f"{table.act.name} {table.sig.sizes}: classes merge at bound {table.bound + 1}")
    table.audited = True


def build_quotient(act: Action, sig: OpticSignature, bound: int | None = None, *,
                   audit: bool = True, caps: Caps | None = None) -> OpticTable:
    """Classes of optics ``sig`` with residuals up to ``bound``.

    With ``audit`` the table is rebuilt one size larger and a mismatch raises
    ``AuditFailure``.
    """
    caps = caps or default_caps()
    bound = default_bound(act, sig) if bound is None else bound
    if bound < 1:
        raise ValueError("bound must be at least 1")
    table = _quotient(act, sig, bound, caps)
    if audit:
        audit_table(table, caps)
    return table


_CACHE: dict[tuple, OpticTable] = {}


def get_table(act: Action, sig: OpticSignature, bound: int | None = None, *,
              audit: bool = True) -> OpticTable:
    """Cached ``build_quotient``."""
    bound = default_bound(act, sig) if bound is None else bound
    key = (act.key, sig.sizes, bound)
    table = _CACHE.get(key)
    if table is None:
        table = build_quotient(act, sig, bound, audit=audit)
        _CACHE[key] = table
    elif audit and not table.audited:
        audit_table(table)
    return table


def clear_cache() -> None:
    _CACHE.clear()


def class_of(table: OpticTable, rep: Representative) -> int:
    return table.class_of(rep)


# ------------------------------------------------------------- reduction

def reduce_rep(act: Action, rep: Representative) -> Representative:
    """Slide ``rep`` down to the smallest residual its left leg touches.

    ``l`` factors as ``T(phi.A) l'`` for an injective ``phi.A`` so the single
    slide ``<(phi.A) l' | r> ~ <l' | r (phi.A')>`` applies.
    """
    sig, M = rep.sig, rep.M
    K, phi = act.shrink(M, sig.A, rep.l)
    if K == M:
        return rep
    nk, nm = act.act_size(K, sig.A), act.act_size(M, sig.A)
    forward = act.monad.fmap(act.res_fn(phi, K, M, sig.A), nk, nm)
    lift = {y: x for x, y in enumerate(forward)}
    l = tuple(lift[c] for c in rep.l)
    back = act.res_fn(phi, K, M, sig.Ap)
    r = tuple(rep.r[x] for x in back)
    return Representative(sig, K, l, r)


def classify(act: Action, rep: Representative, bound: int | None = None) -> tuple[OpticTable, int]:
    """The audited table for ``rep.sig`` and the class of ``rep`` in it."""
    table = get_table(act, rep.sig, bound)
    try:
        return table, table.class_of(rep)
    except OutOfTable:
        small = reduce_rep(act, rep)
        return table, table.class_of(small)


def same_class(act: Action, p: Representative, q: Representative, bound: int | None = None) -> bool:
    if p.sig != q.sig:
        return False
    return classify(act, p, bound)[1] == classify(act, q, bound)[1]


# ------------------------------------------------------- category structure

def identity_optic(act: Action, S: int, Sp: int) -> Representative:
    """``<lambda^-1 | lambda>`` with the unit residual."""
    S, Sp = _size(S), _size(Sp)
    I = act.unit
    l = act.pure(invert_table(act.unitor(S)), act.act_size(I, S))
    r = act.pure(act.unitor(Sp), Sp)
    return Representative(OpticSignature(S, Sp, S, Sp), I, tuple(l), tuple(r))


def iota(act: Action, f: FiniteFunction, g: FiniteFunction) -> Representative:
    """``iota(f, g) = <lambda^-1 f | g lambda>`` for plain ``f : S -> A``, ``g : A' -> S'``."""
    S, A, Ap, Sp = f.dom.size, f.cod.size, g.dom.size, g.cod.size
    I = act.unit
    n = act.act_size(I, A)
    l = act.post(invert_table(act.unitor(A)), act.pure(f.table, A), A, n)
    pg = act.pure(g.table, Sp)
    r = [pg[x] for x in act.unitor(Ap)]
    return Representative(OpticSignature(S, Sp, A, Ap), I, tuple(l), tuple(r))


def compose_optics(act: Action, outer: Representative, inner: Representative) -> Representative:
    """``outer . inner`` = ``<(M.l) l' | r' (M.r)>`` re-indexed along the mediator."""
    so, si = outer.sig, inner.sig
    if (si.A, si.Ap) != (so.S, so.Sp):
        raise SignatureMismatch(f"cannot compose {so.sizes} after {si.sizes}")
    M, N = inner.M, outer.M
    A, Ap = so.A, so.Ap
    n_in = act.act_size(N, A)
    ny, nz = act.act_size(M, so.S), act.act_size(M, n_in)
    lifted = act.act_hom(M, outer.l, so.S, n_in)
    l1 = act.hom_compose(inner.l, lifted, ny, nz)
    MN = act.tensor(M, N)
    l = act.post(invert_table(act.mediator(M, N, A)), l1, nz, act.act_size(MN, A))
    lifted_r = act.act_hom(M, outer.r, act.act_size(N, Ap), so.Sp)
    med = act.mediator(M, N, Ap)
    r1 = [lifted_r[x] for x in med]
    r = act.hom_compose(r1, inner.r, act.act_size(M, so.Sp), si.Sp)
    return Representative(OpticSignature(si.S, si.Sp, A, Ap), MN, tuple(l), tuple(r))


def _need_product(act: Action) -> None:
    if not (isinstance(act, ProductAction) and isinstance(act.monad, IdentityMonad)):
        raise UnsupportedAction(f"{act.name} is not the cartesian product action")


def tensor_optics(act: Action, p: Representative, q: Representative, *,
                  switched: bool = False) -> Representative:
    """``p (x) q`` with residual ``M x N``; ``switched`` swaps the contravariant side."""
    _need_product(act)
    (S, Sp, A, Ap), (T, Tp, B, Bp) = p.sig.sizes, q.sig.sizes
    m, n = p.M[0], q.M[0]
    l = []
    for s in range(S):
        i, a = divmod(p.l[s], A)
        for t in range(T):
            j, b = divmod(q.l[t], B)
            l.append((i * n + j) * (A * B) + a * B + b)
    r = []
    for i in range(m):
        for j in range(n):
            if switched:
                for b in range(Bp):
                    for a in range(Ap):
                        r.append(q.r[j * Bp + b] * Sp + p.r[i * Ap + a])
            else:
                for a in range(Ap):
                    for b in range(Bp):
                        r.append(p.r[i * Ap + a] * Tp + q.r[j * Bp + b])
    if switched:
        sig = OpticSignature(S * T, Tp * Sp, A * B, Bp * Ap)
    else:
        sig = OpticSignature(S * T, Sp * Tp, A * B, Ap * Bp)
    return Representative(sig, (m * n,), tuple(l), tuple(r))


def switched_tensor_optics(act: Action, p: Representative, q: Representative) -> Representative:
    return tensor_optics(act, p, q, switched=True)


def symmetry(act: Action, S: int, Sp: int, T: int, Tp: int) -> Representative:
    """The unswitched symmetry ``(S x T, S' x T') -> (T x S, T' x S')``."""
    _need_product(act)
    f = FiniteFunction(S * T, T * S, swap_table(S, T))
    g = FiniteFunction(Tp * Sp, Sp * Tp, swap_table(Tp, Sp))
    return iota(act, f, g)


# ------------------------------------------------- costates and duality

def costate_to_morphism(act: Action, p: Representative) -> FiniteFunction:
    """``r l : S -> S'`` for a costate ``(S, S') -> (1, 1)``."""
    _need_product(act)
    if (p.sig.A, p.sig.Ap) != (1, 1):
        raise SignatureMismatch("costates have codomain (1, 1)")
    return FiniteFunction(p.sig.S, p.sig.Sp, [p.r[c] for c in p.l])


def morphism_to_costate(act: Action, f: FiniteFunction) -> Representative:
    """``<rho^-1 | f rho>`` with residual ``S``."""
    _need_product(act)
    S = f.dom.size
    return Representative(OpticSignature(S, f.cod.size, 1, 1), (S,), tuple(range(S)), f.table)


def connector(act: Action, S: int) -> Representative:
    S = _size(S)
    return morphism_to_costate(act, FiniteFunction(S, S, range(S)))


def state_count(act: Action, A: int, Ap: int, bound: int | None = None) -> int:
    """Number of optics ``(1, 1) -> (A, A')``."""
    _need_product(act)
    return get_table(act, OpticSignature(1, 1, A, Ap), bound).count


def dual(act: Action, p: Representative) -> Representative:
    """``iota(f, g)* = iota(g, f)``; only unit-residual presentations qualify."""
    _need_product(act)
    if tuple(p.M) != act.unit:
        raise NotDualisable("only optics presented as iota(f, g) have duals")
    S, Sp, A, Ap = p.sig.sizes
    return Representative(OpticSignature(Ap, A, Sp, S), act.unit, p.r, p.l)


def counit(act: Action, S: int, Sp: int) -> Representative:
    """``epsilon_(S, S') : (S x S', S x S') -> (1, 1)``, the connector on ``S x S'``."""
    return connector(act, _size(S) * _size(Sp))


def decompose_composite(act: Action, p: Representative, *, corrupt: bool = False) -> Representative:
    """``((A, 1) (x) eps_(M, 1) (x) (1, A')) (j(s l) (x) j(r s)*)`` with switched tensors.

    Product codes are strictly associative and unital, so every object in
    the composite lines up without explicit re-association.  ``corrupt``
    cycles the ``A`` coordinate of the left leg.
    """
    _need_product(act)
    S, Sp, A, Ap = p.sig.sizes
    m = p.M[0]
    sl = []
    for s in range(S):
        i, a = divmod(p.l[s], A)
        if corrupt:
            a = (a + 1) % A
        sl.append(a * m + i)
    rs = [p.r[i * Ap + a] for a in range(Ap) for i in range(m)]
    left = iota(act, FiniteFunction(S, A * m, sl), FiniteFunction(1, 1, [0]))
    right = dual(act, iota(act, FiniteFunction(Ap * m, Sp, rs), FiniteFunction(1, 1, [0])))
    inner = switched_tensor_optics(act, left, right)
    outer = switched_tensor_optics(
        act,
        switched_tensor_optics(act, identity_optic(act, A, 1), counit(act, m, 1)),
        identity_optic(act, 1, Ap))
    return compose_optics(act, outer, inner)


def decompose_check(act: Action, p: Representative, bound: int | None = None) -> bool:
    q = decompose_composite(act, p)
    return q.sig == p.sig and same_class(act, p, q, bound)


def _costate(act: Action, p: Representative) -> tuple[int, ...]:
    return costate_to_morphism(act, p).table


def extranaturality_square(act: Action, f: FiniteFunction, g: FiniteFunction) -> bool:
    """``eps_Y (iota(f,g) (x) Y*) = eps_X (X (x) iota(f,g)*)`` for ``f : S -> T``, ``g : T' -> S'``.

    Both sides are costates, so they are compared as morphisms.
    """
    S, T, Tp, Sp = f.dom.size, f.cod.size, g.dom.size, g.cod.size
    h = iota(act, f, g)
    left = compose_optics(act, counit(act, T, Tp),
                          switched_tensor_optics(act, h, identity_optic(act, Tp, T)))
    right = compose_optics(act, counit(act, S, Sp),
                           switched_tensor_optics(act, identity_optic(act, S, Sp), dual(act, h)))
    return left.sig == right.sig and _costate(act, left) == _costate(act, right)


def counit_symmetry_square(act: Action, S: int, Sp: int) -> bool:
    """``eps_X . s = eps_(X*)`` on ``X* (x) X`` for ``X = (S, S')``."""
    s = iota(act, FiniteFunction(Sp * S, S * Sp, swap_table(Sp, S)),
             FiniteFunction(S * Sp, Sp * S, swap_table(S, Sp)))
    left = compose_optics(act, counit(act, S, Sp), s)
    return _costate(act, left) == _costate(act, counit(act, Sp, S))


def counit_monoidal_square(act: Action, S: int, Sp: int, T: int, Tp: int) -> bool:
    """``eps_X (X (x) eps_Y (x) X*) = eps_(X (x) Y)`` for ``X = (S, S')``, ``Y = (T, T')``."""
    inner = switched_tensor_optics(
        act, switched_tensor_optics(act, identity_optic(act, S, Sp), counit(act, T, Tp)),
        identity_optic(act, Sp, S))
    left = compose_optics(act, counit(act, S, Sp), inner)
    right = counit(act, S * T, Tp * Sp)
    return left.sig == right.sig and _costate(act, left) == _costate(act, right)


def teleological_checks(act: Action, max_size: int = 2) -> dict[str, list[int]]:
    """Pass/fail counts of the counit squares over all objects of size <= ``max_size``."""
    _need_product(act)
    import itertools as it
    sizes = range(max_size + 1)
    counts = {k: [0, 0] for k in ("extranaturality", "symmetry", "monoidality", "unit")}

    def record(key, ok):
        counts[key][0 if ok else 1] += 1

    for S, Sp, T, Tp in it.product(sizes, repeat=4):
        for f in it.product(range(T), repeat=S):
            for g in it.product(range(Sp), repeat=Tp):
                record("extranaturality",
                       extranaturality_square(act, FiniteFunction(S, T, f), FiniteFunction(Tp, Sp, g)))
        record("monoidality", counit_monoidal_square(act, S, Sp, T, Tp))
    for S, Sp in it.product(sizes, repeat=2):
        record("symmetry", counit_symmetry_square(act, S, Sp))
    record("unit", _costate(act, counit(act, 1, 1)) == (0,))
    return counts


# ----------------------------------------------------- monoidal functors

@dataclass
class MonoidalFunctor:
    """A strong symmetric monoidal endofunctor of finite sets, given by tables.

    ``mor(f, n, m)`` maps a table ``f : n -> m`` to ``F f``; ``phi(x, y)`` is
    the structure map ``F x * F y -> F(x * y)``; ``phi_unit`` is ``1 -> F 1``.
    """

    name: str
    obj: Callable[[int], int]
    mor: Callable[[Sequence[int], int, int], list]
    phi: Callable[[int, int], list]
    phi_unit: Sequence[int]

    def validate(self, max_size: int = 2) -> None:
        """Functoriality, naturality, coherence and strength on sizes <= ``max_size``."""
        import itertools as it
        F, mor, phi = self.obj, self.mor, self.phi
        sizes = range(max_size + 1)

        def fail(msg):
            raise InvalidFunctor(f"{self.name}: {msg}")

        def fns(a, b):
            return [list(t) for t in it.product(range(b), repeat=a)]

        if F(1) != 1 or len(self.phi_unit) != 1:
            fail("phi_unit must be a bijection 1 -> F 1")
        for n in sizes:
            if mor(list(range(n)), n, n) != list(range(F(n))):
                fail(f"F(id_{n}) is not the identity")
        for a, b, c in it.product(sizes, repeat=3):
            for f in fns(a, b):
                Ff = mor(f, a, b)
                if len(Ff) != F(a) or any(not 0 <= y < F(b) for y in Ff):
                    fail("F f does not typecheck")
                for g in fns(b, c):
                    gf = [g[x] for x in f]
                    if mor(gf, a, c) != [mor(g, b, c)[y] for y in Ff]:
                        fail("F does not preserve composition")
        for x, y in it.product(sizes, repeat=2):
            p = phi(x, y)
            if sorted(p) != list(range(F(x * y))) or len(p) != F(x) * F(y):
                fail(f"phi_{x},{y} is not a bijection")
            swapped = [phi(y, x)[c] for c in swap_table(F(x), F(y))]
            Fs = mor(swap_table(x, y), x * y, y * x)
            if [Fs[c] for c in p] != swapped:
                fail("phi is not symmetric")
        for x, y, z in it.product(sizes, repeat=3):
            fx, fy, fz = F(x), F(y), F(z)
            lhs = [phi(x * y, z)[phi(x, y)[a * fy + b] * fz + c]
                   for a in range(fx) for b in range(fy) for c in range(fz)]
            rhs = [phi(x, y * z)[a * F(y * z) + phi(y, z)[b * fz + c]]
                   for a in range(fx) for b in range(fy) for c in range(fz)]
            if lhs != rhs:
                fail("phi is not associative")
        for x in sizes:
            if [phi(1, x)[self.phi_unit[0] * F(x) + a] for a in range(F(x))] != list(range(F(x))):
                fail("left unit coherence fails")
            if [phi(x, 1)[a + self.phi_unit[0]] for a in range(F(x))] != list(range(F(x))):
                fail("right unit coherence fails")
        for x, y, x2, y2 in it.product(range(min(max_size, 2) + 1), repeat=4):
            for f in fns(x, x2):
                for g in fns(y, y2):
                    fg = [f[a] * y2 + g[b] for a in range(x) for b in range(y)]
                    Ffg = mor(fg, x * y, x2 * y2)
                    Ff, Fg = mor(f, x, x2), mor(g, y, y2)
                    lhs = [Ffg[phi(x, y)[c]] for c in range(F(x) * F(y))]
                    rhs = [phi(x2, y2)[Ff[a] * F(y2) + Fg[b]] for a in range(F(x)) for b in range(F(y))]
                    if lhs != rhs:
                        fail("phi is not natural")


def identity_functor() -> MonoidalFunctor:
    return MonoidalFunctor("identity", lambda n: n, lambda f, n, m: list(f),
                           lambda x, y: list(range(x * y)), [0])


def diagonal_functor() -> MonoidalFunctor:
    """``X -> X x X`` with the interleaving structure map."""

    def mor(f, n, m):
        return [f[a] * m + f[b] for a in range(n) for b in range(n)]

    def phi(x, y):
        out = []
        for x1 in range(x):
            for x2 in range(x):
                for y1 in range(y):
                    for y2 in range(y):
                        out.append((x1 * y + y1) * (x * y) + x2 * y + y2)
        return out

    return MonoidalFunctor("diagonal", lambda n: n * n, mor, phi, [0])


def map_optic(act: Action, F: MonoidalFunctor, p: Representative, *, validate: bool = True) -> Representative:
    """``Optic(F) <l|r> = <phi^-1 (F l) | (F r) phi>`` with residual ``F M``."""
    _need_product(act)
    if validate:
        F.validate()
    S, Sp, A, Ap = p.sig.sizes
    m = p.M[0]
    Fl = F.mor(p.l, S, m * A)
    Fr = F.mor(p.r, m * Ap, Sp)
    l = [invert_table(F.phi(m, A))[c] for c in Fl]
    ph = F.phi(m, Ap)
    r = [Fr[ph[c]] for c in range(F.obj(m) * F.obj(Ap))]
    sig = OpticSignature(F.obj(S), F.obj(Sp), F.obj(A), F.obj(Ap))
    return Representative(sig, (F.obj(m),), tuple(l), tuple(r))
