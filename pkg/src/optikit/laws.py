"""Lawfulness of optics and the concrete laws of each variant.

An optic ``p : S -> A`` (with ``S = S'`` and ``A = A'``) is lawful when

* ``outside(p) = l;r`` is the identity of ``S``, and
* ``once(p) = <l | id | r>`` and ``twice(p) = <l | r;l | r>`` are equal as
  elements of the double coend over ``(M1, M2)`` of
  ``C(S, M1.A) x C(M1.A, M2.A) x C(M2.A, S)``.

The double coend is computed like the single one: every chain
``<l | c | r>`` with both residuals inside a bound is enumerated and merged
along slides at either junction::

    <l;(phi.A) | c | r>  ~  <l | (phi.A);c | r>
    <l | c;(psi.A) | r>  ~  <l | c | (psi.A);r>

(``;`` is diagrammatic composition.)  Bounded tables can only under-merge,
so a verdict of "different" is cross-checked with a complete invariant of
the double coend (``chain_invariant``) when one is known for the action.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .action import (Action, AffineAction, CoproductAction, IdentityMonad, ProductAction,
                     TrivialAction)
from .caps import Caps, check_cap, default_caps
from .concrete import (Affine, ConcreteOptic, Iso, Lens, Linear, Prism, Setter, StatefulLens,
                       Traversal, concretize)
from .errors import AuditFailure, KindMismatch, OutOfTable, Overflow, SignatureMismatch, UnsupportedAction
from .finset import FiniteFunction, exp_encode
from .optic_core import (OpticSignature, Representative, UnionFind, _digits, _lex, _lex_one,
                         _unlex, compose_optics, diagonal_functor, get_table,
                         map_optic, reduce_rep, tensor_optics)

__all__ = [
    "ChainRep", "ChainTable", "InsideTable", "LawReport", "LawVerdict", "Report",
    "OnTheNose", "outside", "once", "twice", "reduce_chain", "build_chain_table",
    "get_chain_table", "chain_invariant", "coalgebraic_invariant", "lawful_verdict",
    "is_lawful", "concrete_laws", "laws_of", "lawfulness_equivalence",
    "prism_third_law_check", "inside", "build_inside_table", "action_image",
    "onthenose_search", "lawful_closure_checks", "lawful_classes",
    "DEFAULT_CHAIN_BOUND", "DEFAULT_SEARCH_STEPS",
]

DEFAULT_CHAIN_BOUND = 2
DEFAULT_SEARCH_STEPS = 64


def _need_unprimed(sig: OpticSignature) -> None:
    if not sig.unprimed:
        raise SignatureMismatch(f"laws need S = S' and A = A', got {sig.sizes}")


def _is_plain(act: Action, cls) -> bool:
    return isinstance(act, cls) and isinstance(act.monad, IdentityMonad)


# ------------------------------------------------------------ chains

@dataclass(frozen=True)
class ChainRep:
    """``<l | c | r>`` with ``l : S -> M1.A``, ``c : M1.A -> M2.A``, ``r : M2.A -> S'``.

    Legs are hom code tables, as for ``Representative``.
    """

    sig: OpticSignature
    M1: tuple
    M2: tuple
    l: tuple[int, ...]
    c: tuple[int, ...]
    r: tuple[int, ...]

    def to_json(self) -> dict:
        return {"sig": self.sig.to_json(), "M1": list(self.M1), "M2": list(self.M2),
                "l": list(self.l), "c": list(self.c), "r": list(self.r)}


def outside(act: Action, p: Representative) -> FiniteFunction:
    """``l;r : S -> S`` as a hom table."""
    _need_unprimed(p.sig)
    S, A = p.sig.S, p.sig.A
    table = act.hom_compose(p.l, p.r, act.act_size(p.M, A), S)
    return FiniteFunction(S, act.hom_size(S), table)


def once(act: Action, p: Representative) -> ChainRep:
    _need_unprimed(p.sig)
    n = act.act_size(p.M, p.sig.A)
    return ChainRep(p.sig, p.M, p.M, p.l, tuple(act.hom_identity(n)), p.r)


def twice(act: Action, p: Representative) -> ChainRep:
    _need_unprimed(p.sig)
    n = act.act_size(p.M, p.sig.A)
    c = act.hom_compose(p.r, p.l, p.sig.S, n)
    return ChainRep(p.sig, p.M, p.M, p.l, tuple(c), p.r)


def _lift(act: Action, M, K, phi, A: int, codes: Sequence[int]) -> tuple[int, ...]:
    """Pull codes of ``T(M.A)`` back along the injective ``T(phi.A) : T(K.A) -> T(M.A)``."""
    nk, nm = act.act_size(K, A), act.act_size(M, A)
    forward = act.monad.fmap(act.res_fn(phi, K, M, A), nk, nm)
    back = {y: x for x, y in enumerate(forward)}
    return tuple(back[x] for x in codes)


def reduce_chain(act: Action, ch: ChainRep) -> ChainRep:
    """Slide both residuals down to the points the legs actually use."""
    A = ch.sig.A
    K1, phi1 = act.shrink(ch.M1, A, ch.l)
    l, c = ch.l, ch.c
    if K1 != ch.M1:
        l = _lift(act, ch.M1, K1, phi1, A, l)
        c = tuple(c[x] for x in act.res_fn(phi1, K1, ch.M1, A))
    K2, phi2 = act.shrink(ch.M2, A, c)
    r = ch.r
    if K2 != ch.M2:
        c = _lift(act, ch.M2, K2, phi2, A, c)
        r = tuple(r[x] for x in act.res_fn(phi2, K2, ch.M2, A))
    return ChainRep(ch.sig, K1, K2, l, c, r)


# ------------------------------------------------------- chain tables

def chain_residuals(act: Action, bound: int) -> list:
    """Residuals of total weight at most ``bound``, lightest first."""
    res = [M for M in act.residuals(bound) if sum(M) <= bound]
    return sorted(res, key=act.residual_weight)


@dataclass(frozen=True)
class _CBlock:
    M1: tuple
    M2: tuple
    lcod: int
    nl: int
    cdom: int
    ccod: int
    nc: int
    rdom: int
    rcod: int
    nr: int
    offset: int

    @property
    def count(self) -> int:
        return self.nl * self.nc * self.nr


def _chain_blocks(act: Action, sig: OpticSignature, bound: int) -> list[_CBlock]:
    res = chain_residuals(act, bound)
    out, offset = [], 0
    rcod = act.hom_size(sig.Sp)
    for M1 in res:
        n1 = act.act_size(M1, sig.A)
        lcod = act.hom_size(n1)
        for M2 in res:
            n2 = act.act_size(M2, sig.A)
            ccod = act.hom_size(n2)
            b = _CBlock(M1, M2, lcod, lcod ** sig.S, n1, ccod, ccod ** n1, n2, rcod, rcod ** n2, offset)
            out.append(b)
            offset += b.count
    return out


def chain_table_size(act: Action, sig: OpticSignature, bound: int) -> int:
    return sum(b.count for b in _chain_blocks(act, sig, bound))


class ChainTable:
    """Classes of chains ``<l | c | r>`` with both residuals of weight <= ``bound``.

    Index inside a block is ``(l_index * nc + c_index) * nr + r_index``; the
    least index of a class is its canonical chain.
    """

    def __init__(self, act: Action, sig: OpticSignature, bound: int, blocks: list[_CBlock],
                 labels: np.ndarray, canon: np.ndarray, sizes: np.ndarray):
        self.act, self.sig, self.bound = act, sig, bound
        self.blocks = blocks
        self._by_M = {(b.M1, b.M2): b for b in blocks}
        self._offsets = np.array([b.offset for b in blocks], dtype=np.int64)
        self.labels, self.canon_index, self.class_sizes = labels, canon, sizes

    @property
    def count(self) -> int:
        return int(len(self.canon_index))

    @property
    def n_reps(self) -> int:
        return int(len(self.labels))

    def index_of(self, ch: ChainRep) -> int:
        if ch.sig != self.sig:
            raise SignatureMismatch(f"{ch.sig} is not the table signature {self.sig}")
        b = self._by_M.get((tuple(ch.M1), tuple(ch.M2)))
        if b is None:
            raise OutOfTable(f"residuals {ch.M1}, {ch.M2} lie outside chain bound {self.bound}")
        return b.offset + (_lex_one(ch.l, b.lcod) * b.nc + _lex_one(ch.c, b.ccod)) * b.nr \
            + _lex_one(ch.r, b.rcod)

    def rep_at(self, index: int) -> ChainRep:
        k = int(np.searchsorted(self._offsets, index, side="right")) - 1
        b = self.blocks[k]
        rest, ri = divmod(int(index) - b.offset, b.nr)
        li, ci = divmod(rest, b.nc)
        return ChainRep(self.sig, b.M1, b.M2, _unlex(li, b.lcod, self.sig.S),
                        _unlex(ci, b.ccod, b.cdom), _unlex(ri, b.rcod, b.rdom))

    def class_of(self, ch: ChainRep) -> int:
        try:
            return int(self.labels[self.index_of(ch)])
        except OutOfTable:
            return int(self.labels[self.index_of(reduce_chain(self.act, ch))])

    def canon(self, cid: int) -> ChainRep:
        return self.rep_at(int(self.canon_index[cid]))

    def members(self, cid: int) -> Iterator[ChainRep]:
        for i in np.flatnonzero(self.labels == cid):
            yield self.rep_at(int(i))


def _left_edges(act, sig, bm: _CBlock, bn: _CBlock, phi, chunk):
    """Slides ``<l;(phi.A) | c | r> ~ <l | (phi.A);c | r>`` for ``phi : M1 -> N1``."""
    if bm.nl == 0 or bn.nc == 0 or bm.nr == 0:
        return
    plain = act.res_fn(phi, bm.M1, bn.M1, sig.A)
    code_map = np.asarray(act.monad.fmap(plain, bm.cdom, bn.cdom), dtype=np.int64)
    lmapped = _lex(code_map[_digits(sig.S, bm.lcod)], bn.lcod)
    crows = _digits(bn.cdom, bn.ccod)
    cpre = _lex(crows[:, np.asarray(plain, dtype=np.int64)] if plain else crows[:, :0], bm.ccod)
    inner = (np.arange(bn.nc, dtype=np.int64)[:, None] * bn.nr
             + np.arange(bn.nr, dtype=np.int64)[None, :]).ravel()
    inner_v = (cpre[:, None] * bm.nr + np.arange(bm.nr, dtype=np.int64)[None, :]).ravel()
    step = max(1, chunk // max(inner.size, 1))
    for start in range(0, bm.nl, step):
        li = np.arange(start, min(bm.nl, start + step), dtype=np.int64)
        u = bn.offset + (lmapped[li] * (bn.nc * bn.nr))[:, None] + inner[None, :]
        v = bm.offset + (li * (bm.nc * bm.nr))[:, None] + inner_v[None, :]
        yield u, v


def _right_edges(act, sig, bm: _CBlock, bn: _CBlock, psi, chunk):
    """Slides ``<l | c;(psi.A) | r> ~ <l | c | (psi.A);r>`` for ``psi : M2 -> N2``."""
    if bm.nl == 0 or bm.nc == 0 or bn.nr == 0:
        return
    plain = act.res_fn(psi, bm.M2, bn.M2, sig.A)
    code_map = np.asarray(act.monad.fmap(plain, bm.rdom, bn.rdom), dtype=np.int64)
    cpost = _lex(code_map[_digits(bm.cdom, bm.ccod)], bn.ccod)
    rrows = _digits(bn.rdom, bn.rcod)
    rpre = _lex(rrows[:, np.asarray(plain, dtype=np.int64)] if plain else rrows[:, :0], bm.rcod)
    inner_u = (cpost[:, None] * bn.nr + np.arange(bn.nr, dtype=np.int64)[None, :]).ravel()
    inner_v = (np.arange(bm.nc, dtype=np.int64)[:, None] * bm.nr + rpre[None, :]).ravel()
    step = max(1, chunk // max(inner_u.size, 1))
    for start in range(0, bm.nl, step):
        li = np.arange(start, min(bm.nl, start + step), dtype=np.int64)
        u = bn.offset + (li * (bn.nc * bn.nr))[:, None] + inner_u[None, :]
        v = bm.offset + (li * (bm.nc * bm.nr))[:, None] + inner_v[None, :]
        yield u, v


def build_chain_table(act: Action, sig: OpticSignature, bound: int = DEFAULT_CHAIN_BOUND, *,
                      caps: Caps | None = None) -> ChainTable:
    if sig.A != sig.Ap:
        raise SignatureMismatch("chains need A = A'")
    caps = caps or default_caps()
    blocks = _chain_blocks(act, sig, bound)
    total = sum(b.count for b in blocks)
    check_cap(total, caps.reps, "chain enumeration")
    by_M = {(b.M1, b.M2): b for b in blocks}
    res = chain_residuals(act, bound)
    gens = [(M, N, g) for M, N, g in act.generators(bound) if M in res and N in res]
    uf = UnionFind(total)
    for M, N, g in gens:
        for K in res:
            for u, v in _left_edges(act, sig, by_M[(M, K)], by_M[(N, K)], g, 1 << 22):
                uf.union(u, v)
            for u, v in _right_edges(act, sig, by_M[(K, M)], by_M[(K, N)], g, 1 << 22):
                uf.union(u, v)
    roots = uf.flatten()
    canon, labels, sizes = np.unique(roots, return_inverse=True, return_counts=True)
    return ChainTable(act, sig, bound, blocks, labels.astype(np.int64), canon, sizes)


_CHAIN_CACHE: dict[tuple, ChainTable] = {}


def get_chain_table(act: Action, sig: OpticSignature, bound: int = DEFAULT_CHAIN_BOUND) -> ChainTable:
    key = (act.key, sig.sizes, bound)
    table = _CHAIN_CACHE.get(key)
    if table is None:
        table = build_chain_table(act, sig, bound)
        _CHAIN_CACHE[key] = table
    return table


# ------------------------------------------------- chain invariants

def _lens_phi(ch: ChainRep) -> tuple:
    """``(l;pi2, (l;pi1 x A);c;pi2, ((l;pi1 x A);c;pi1 x A);r)``."""
    S, A = ch.sig.S, ch.sig.A
    first = tuple(ch.l[s] % A for s in range(S))
    second, third = [], []
    for s in range(S):
        m1 = ch.l[s] // A
        for a in range(A):
            m2, a2 = divmod(ch.c[m1 * A + a], A)
            second.append(a2)
            for a3 in range(A):
                third.append(ch.r[m2 * A + a3])
    return first, tuple(second), tuple(third)


def _prism_phi(ch: ChainRep) -> tuple:
    """The dual: ``(r.inr, [inl r_M, inr] c.inr, [[inl r_M, in2] c_M, in3] l)``.

    Codes in ``S' + A + A`` are ``s``, ``S' + a`` and ``S' + A + a``.
    """
    S, Y, A = ch.sig.S, ch.sig.Sp, ch.sig.A
    m1, m2 = ch.M1[0], ch.M2[0]

    def through_r(y: int) -> int:          # M2 + A -> S' + A
        return ch.r[y] if y < m2 else Y + (y - m2)

    review = tuple(ch.r[m2 + a] for a in range(A))
    middle = tuple(through_r(ch.c[m1 + a]) for a in range(A))
    outer = []
    for s in range(S):
        x = ch.l[s]
        outer.append(through_r(ch.c[x]) if x < m1 else Y + A + (x - m1))
    return review, middle, tuple(outer)


def _affine_transpose(M, r: Sequence[int], Y: int, A: int) -> list[int]:
    """``(r^T).A : M.A -> Y + Y^A x A`` for a plain ``r : M.A -> Y``."""
    p, q = M
    out = [r[i] for i in range(p)]
    for j in range(q):
        h = exp_encode([r[p + j * A + a] for a in range(A)], Y)
        out += [Y + h * A + a for a in range(A)]
    return out


def _lens_transpose(M, r: Sequence[int], Y: int, A: int) -> list[int]:
    """``(r^T).A : M x A -> Y^A x A``."""
    out = []
    for m in range(M[0]):
        h = exp_encode([r[m * A + a] for a in range(A)], Y)
        out += [h * A + a for a in range(A)]
    return out


def coalgebraic_invariant(act: Action, ch: ChainRep) -> tuple[int, ...]:
    """``((((r^T).A) c)^T . A) l : S -> R(R S . A) . A`` for actions with a right adjoint."""
    A = ch.sig.A
    if _is_plain(act, AffineAction):
        transpose, wsize = _affine_transpose, lambda y: y + y ** A * A
    elif _is_plain(act, ProductAction):
        transpose, wsize = _lens_transpose, lambda y: y ** A * A
    else:
        raise UnsupportedAction(f"no right adjoint is available for {act.name}")
    t2 = transpose(ch.M2, ch.r, ch.sig.Sp, A)
    inner = [t2[y] for y in ch.c]
    t1 = transpose(ch.M1, inner, wsize(ch.sig.Sp), A)
    return tuple(t1[x] for x in ch.l)


def chain_invariant(act: Action, ch: ChainRep) -> tuple:
    """A complete invariant of the double coend, where one is known.

    Lenses use the projection formula, prisms its dual, isos the legs
    themselves and affine traversals the coalgebraic transpose.
    """
    if _is_plain(act, ProductAction):
        return _lens_phi(ch)
    if isinstance(act, CoproductAction):
        return _prism_phi(ch)
    if isinstance(act, TrivialAction):
        return (ch.l, ch.c, ch.r)
    if _is_plain(act, AffineAction):
        return coalgebraic_invariant(act, ch)
    raise UnsupportedAction(f"no chain invariant is known for {act.name}")


def _has_invariant(act: Action) -> bool:
    return (_is_plain(act, ProductAction) or isinstance(act, (CoproductAction, TrivialAction))
            or _is_plain(act, AffineAction))


# ----------------------------------------------------------- verdicts

@dataclass(frozen=True)
class LawVerdict:
    """``lawful`` is ``None`` when the chosen method could not decide."""

    lawful: bool | None
    outside_identity: bool
    chain_equal: bool | None
    method: str
    audited: bool
    note: str = ""

    def to_json(self) -> dict:
        return {"lawful": self.lawful, "outside_identity": self.outside_identity,
                "chain_equal": self.chain_equal, "method": self.method,
                "audited": self.audited, "note": self.note}


def _outside_is_identity(act: Action, p: Representative) -> bool:
    return list(outside(act, p).table) == list(act.hom_identity(p.sig.S))


def _table_verdict(act: Action, p: Representative, chain_bound: int, caps: Caps) -> LawVerdict:
    small = reduce_rep(act, p)
    a, b = reduce_chain(act, once(act, small)), reduce_chain(act, twice(act, small))
    table = get_chain_table(act, p.sig, chain_bound)
    if table.class_of(a) == table.class_of(b):
        return LawVerdict(True, True, True, "table", True)
    if _has_invariant(act):
        if chain_invariant(act, a) != chain_invariant(act, b):
            return LawVerdict(False, True, False, "table", True)
        raise AuditFailure(f"{act.name} {p.sig.sizes}: once and twice agree on the chain invariant "
                           f"but are not joined at chain bound {chain_bound}")
    bigger = chain_bound + 1
    if chain_table_size(act, p.sig, bigger) > caps.reps:
        raise AuditFailure(f"{act.name} {p.sig.sizes}: cannot audit the chain verdict at bound {bigger}")
    table2 = get_chain_table(act, p.sig, bigger)
    if table2.class_of(a) == table2.class_of(b):
        raise AuditFailure(f"{act.name} {p.sig.sizes}: once and twice merge at chain bound {bigger}")
    return LawVerdict(False, True, False, "table", True, f"stable at chain bound {bigger}")


def lawful_verdict(act: Action, p: Representative, *, method: str = "table",
                   chain_bound: int | None = None, steps: int = DEFAULT_SEARCH_STEPS) -> LawVerdict:
    """Decide lawfulness of ``p``.

    ``method="table"`` compares ``once`` and ``twice`` in the bounded chain
    table.  ``method="auto"`` first looks for cheap certificates (a
    representative whose ``r;l`` is literally ``psi.A``), then uses the
    table when it fits the caps, then the chain invariant, and finally the
    on-the-nose search.
    """
    _need_unprimed(p.sig)
    caps = default_caps()
    chain_bound = DEFAULT_CHAIN_BOUND if chain_bound is None else chain_bound
    if not _outside_is_identity(act, p):
        return LawVerdict(False, False, None, "outside", True)
    if method == "table":
        return _table_verdict(act, p, chain_bound, caps)
    if method != "auto":
        raise ValueError(f"unknown method {method!r}")
    for q in (p, reduce_rep(act, p)):
        if action_image(act, q.M, q.sig.A, _inside_code(act, q)) is not None:
            return LawVerdict(True, True, True, "onthenose", True)
    if chain_table_size(act, p.sig, chain_bound) <= caps.reps:
        try:
            return _table_verdict(act, p, chain_bound, caps)
        except (OutOfTable, Overflow, AuditFailure):
            pass
    if _has_invariant(act):
        equal = chain_invariant(act, once(act, p)) == chain_invariant(act, twice(act, p))
        return LawVerdict(equal, True, equal, "invariant", True)
    found = onthenose_search(act, p, steps=steps, bound=chain_bound)
    if found.status == "found":
        return LawVerdict(True, True, True, "onthenose-search", True)
    return LawVerdict(None, True, None, "inconclusive", False, found.note)


def is_lawful(act: Action, p: Representative, bound: int | None = None, *,
              method: str = "table") -> bool:
    """``outside(p) = id`` and ``once(p) = twice(p)``; ``bound`` is the chain bound."""
    v = lawful_verdict(act, p, method=method, chain_bound=bound)
    if v.lawful is None:
        raise AuditFailure(f"lawfulness of {p.sig.sizes} undecided: {v.note}")
    return v.lawful


# ------------------------------------------------------ concrete laws

@dataclass(frozen=True)
class LawReport:
    kind: str
    laws: dict
    note: str = ""

    @property
    def overall(self) -> bool:
        return all(self.laws.values())

    def holds(self, *names: str) -> bool:
        return all(self.laws[n] for n in names)

    def to_json(self) -> dict:
        out = {"kind": self.kind, "laws": dict(self.laws), "overall": self.overall}
        if self.note:
            out["note"] = self.note
        return out


def _lens_laws(c: Lens) -> dict:
    S, A = c.sig.S, c.sig.A
    get, put = c.view, c.update
    return {
        "GetPut": all(put(s, get(s)) == s for s in range(S)),
        "PutGet": all(get(put(s, a)) == a for s in range(S) for a in range(A)),
        "PutPut": all(put(put(s, a), b) == put(s, b)
                      for s in range(S) for a in range(A) for b in range(A)),
    }


def _prism_laws(c: Prism) -> dict:
    S, A = c.sig.S, c.sig.A
    m, rv = c.matching, c.review
    return {
        "MatchingReview": all(m[rv[a]] == S + a for a in range(A)),
        "ReviewMatching": all((m[s] if m[s] < S else rv[m[s] - S]) == s for s in range(S)),
        "MatchingMatching": all(m[m[s]] == m[s] for s in range(S) if m[s] < S),
    }


def _iso_laws(c: Iso) -> dict:
    S, A = c.sig.S, c.sig.A
    return {
        "ToFrom": all(c.frm[c.to[s]] == s for s in range(S)),
        "FromTo": all(c.to[c.frm[a]] == a for a in range(A)),
    }


def _affine_laws(c: Affine) -> dict:
    S, A = c.sig.S, c.sig.A
    counit, comult = True, True
    for s in range(S):
        case = c.case(s)
        if case[0] == 0:
            x = case[1]
            counit &= x == s
            comult &= c.step[x] == x
        else:
            _, h, a = case
            counit &= h[a] == s
            hcode = exp_encode(h, S)
            comult &= all(c.step[h[b]] == S + hcode * A + b for b in range(A))
    return {"counit": counit, "comultiplication": comult}


def _linear_laws(c: Linear) -> dict:
    S, A = c.sig.S, c.sig.A
    rezip, zipzip = True, True
    for s in range(S):
        h, a = c.split(s)
        rezip &= h[a] == s
        code = c.unzip[s] - a
        zipzip &= all(c.unzip[h[b]] == code + b for b in range(A))
    return {"Rezip": rezip, "ZipZip": zipzip}


def _traversal_laws(c: Traversal) -> dict:
    A = c.sig.A
    counit, comult = True, True
    for s, b in enumerate(c.branches):
        counit &= b.rebuild(b.focus, A) == s
        for values in itertools.product(range(A), repeat=b.n):
            t = c.branches[b.rebuild(values, A)]
            comult &= t.n == b.n and t.focus == tuple(values) and t.k == b.k
    return {"counit": counit, "comultiplication": comult}


def _setter_laws(c: Setter) -> dict:
    S, A = c.sig.S, c.sig.A
    fns = [tuple(f) for f in itertools.product(range(A), repeat=A)]
    over = {f: c.apply(f) for f in fns}
    ident = over[tuple(range(A))] == tuple(range(S))
    comp = all(tuple(over[f][over[g][s]] for s in range(S)) == over[tuple(f[g[a]] for a in range(A))]
               for f in fns for g in fns)
    return {"identity": ident, "composition": comp}


def _stateful_laws(c: StatefulLens) -> dict:
    S, A, Q = c.sig.S, c.sig.A, c.q
    get_put = all(c.run_put(s, q0, *c.run_get(s, q0)) == (s, q0)
                  for s in range(S) for q0 in range(Q))
    put_get = all(c.run_get(*c.run_put(s, q, a, q0)) == (a, q0)
                  for s in range(S) for q in range(Q) for a in range(A) for q0 in range(Q))
    put_put = True
    for s, q1, q2, a1 in itertools.product(range(S), range(Q), range(Q), range(A)):
        s2, q3 = c.run_put(s, q1, a1, q2)
        put_put &= all(c.run_put(s2, q3, a2, q0) == c.run_put(s, q1, a2, q0)
                       for a2 in range(A) for q0 in range(Q))
    return {"GetPut": get_put, "PutGet": put_get, "PutPut": put_put}


_CHECKERS = {
    "lens": _lens_laws, "prism": _prism_laws, "iso": _iso_laws, "affine": _affine_laws,
    "linear": _linear_laws, "traversal": _traversal_laws, "setter": _setter_laws,
    "stateful": _stateful_laws,
}

_NOTES = {"setter": "checked concretely only; setters have no enumerable residual category"}


def concrete_laws(kind: str, concrete: ConcreteOptic) -> LawReport:
    """Evaluate the concrete laws of ``kind`` pointwise over all inputs."""
    if concrete.kind != kind:
        raise KindMismatch(f"expected a {kind}, got a {concrete.kind}")
    if kind not in _CHECKERS:
        raise KindMismatch(f"no concrete laws are known for {kind}")
    _need_unprimed(concrete.sig)
    return LawReport(kind, _CHECKERS[kind](concrete), _NOTES.get(kind, ""))


def laws_of(concrete: ConcreteOptic) -> LawReport:
    return concrete_laws(concrete.kind, concrete)


# ------------------------------------------------------------ reports

@dataclass
class Report:
    name: str
    passed: bool
    checked: int = 0
    failures: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "checked": self.checked,
                "failures": list(self.failures), "details": dict(self.details)}


def lawful_classes(act: Action, S: int, A: int, *, bound: int | None = None,
                   chain_bound: int | None = None) -> list[Representative]:
    table = get_table(act, OpticSignature(S, S, A, A), bound)
    return [p for p in table.canons() if is_lawful(act, p, chain_bound)]


def lawfulness_equivalence(act: Action, sizes: Sequence[int] = (2, 2), bound: int | None = None, *,
                           chain_bound: int | None = None) -> Report:
    """Quotient lawfulness against the concrete laws on every class."""
    S, A = sizes[0], sizes[-1]
    sig = OpticSignature(S, S, A, A)
    table = get_table(act, sig, bound)
    failures, lawful, fast_mismatch = [], 0, 0
    for cid, p in enumerate(table.canons()):
        verdict = lawful_verdict(act, p, chain_bound=chain_bound)
        report = laws_of(concretize(act, p))
        lawful += bool(verdict.lawful)
        if verdict.lawful != report.overall:
            failures.append({"class": cid, "quotient": verdict.lawful, "concrete": report.to_json()})
        if _is_plain(act, ProductAction) and verdict.outside_identity:
            fast = _lens_phi(once(act, p)) == _lens_phi(twice(act, p))
            if fast != verdict.lawful:
                fast_mismatch += 1
                failures.append({"class": cid, "fast_path": fast, "quotient": verdict.lawful})
    details = {"action": act.name, "sizes": [S, A], "classes": table.count, "lawful": lawful}
    if _is_plain(act, ProductAction):
        details["fast_path_mismatches"] = fast_mismatch
    return Report("lawfulness-equivalence", not failures, table.count, failures, details)


def prism_third_law_check(max_size: int = 3) -> Report:
    """No prism satisfies the first two laws but fails the third, for ``|S|, |A| <= max_size``.

    Concrete prisms are in bijection with prism classes, so this ranges over
    every class.
    """
    failures, checked, two_law = [], 0, 0
    for S in range(max_size + 1):
        for A in range(max_size + 1):
            sig = OpticSignature(S, S, A, A)
            for review in itertools.product(range(S), repeat=A):
                if len(set(review)) != A:      # the first law forces an injective review
                    checked += (S + A) ** S
                    continue
                for matching in itertools.product(range(S + A), repeat=S):
                    checked += 1
                    rep = concrete_laws("prism", Prism(sig, matching, review))
                    if rep.holds("MatchingReview", "ReviewMatching"):
                        two_law += 1
                        if not rep.laws["MatchingMatching"]:
                            failures.append({"sizes": [S, A], "matching": list(matching),
                                             "review": list(review)})
    return Report("prism-third-law", not failures, checked, failures,
                  {"max_size": max_size, "satisfying_first_two": two_law})


# -------------------------------------------------------------- inside

def _inside_code(act: Action, p: Representative) -> tuple[int, ...]:
    """``r;l : M.A -> M.A``."""
    n = act.act_size(p.M, p.sig.A)
    return tuple(act.hom_compose(p.r, p.l, p.sig.S, n))


def action_image(act: Action, M, A: int, u: Sequence[int], *, limit: int = 1 << 16):
    """A residual endomorphism ``psi`` with ``u = psi.A`` on the nose, or ``None``."""
    n = act.act_size(M, A)
    u = list(u)
    if _is_plain(act, ProductAction):
        if A == 0:
            return tuple(range(M[0]))
        psi = []
        for m in range(M[0]):
            target = u[m * A] // A
            if any(u[m * A + a] != target * A + a for a in range(A)):
                return None
            psi.append(target)
        return tuple(psi)
    if isinstance(act, CoproductAction):
        m = M[0]
        if any(u[m + a] != m + a for a in range(A)) or any(x >= m for x in u[:m]):
            return None
        return tuple(u[:m])
    count = 0
    for psi in act.morphisms(M, M):
        count += 1
        if count > limit:
            raise Overflow(f"more than {limit} residual endomorphisms of {M}")
        if list(act.pure(act.res_fn(psi, M, M, A), n)) == u:
            return psi
    return None


class InsideTable:
    """Classes of ``<u>`` for ``u : M.A -> M.A`` under ``<f;(phi.A)> ~ <(phi.A);f>``."""

    def __init__(self, act: Action, A: int, bound: int, caps: Caps | None = None):
        caps = caps or default_caps()
        self.act, self.A, self.bound = act, A, bound
        self.residuals = chain_residuals(act, bound)
        self.offsets, total = {}, 0
        for M in self.residuals:
            n = act.act_size(M, A)
            self.offsets[M] = total
            total += act.hom_size(n) ** n
        check_cap(total, caps.reps, "inside enumeration")
        uf = UnionFind(total)
        for M, N, phi in act.generators(bound):
            if M not in self.offsets or N not in self.offsets:
                continue
            nm, nn = act.act_size(M, A), act.act_size(N, A)
            hm, hn = act.hom_size(nm), act.hom_size(nn)
            plain = np.asarray(act.res_fn(phi, M, N, A), dtype=np.int64)
            code_map = np.asarray(act.monad.fmap(list(plain), nm, nn), dtype=np.int64)
            rows = _digits(nn, hm)                                   # f : N.A -> T(M.A)
            at_n = self.offsets[N] + _lex(code_map[rows], hn)        # f;(phi.A)
            at_m = self.offsets[M] + _lex(rows[:, plain] if plain.size else rows[:, :0], hm)
            uf.union(at_n, at_m)
        roots = uf.flatten()
        self.canon_index, self.labels = np.unique(roots, return_inverse=True)

    @property
    def count(self) -> int:
        return int(len(self.canon_index))

    def index_of(self, M, u: Sequence[int]) -> int:
        if M not in self.offsets:
            raise OutOfTable(f"residual {M} lies outside bound {self.bound}")
        return self.offsets[M] + _lex_one(u, self.act.hom_size(self.act.act_size(M, self.A)))

    def class_of(self, M, u: Sequence[int]) -> int:
        return int(self.labels[self.index_of(M, u)])


def build_inside_table(act: Action, A: int, bound: int = DEFAULT_CHAIN_BOUND) -> InsideTable:
    return InsideTable(act, A, bound)


def inside(act: Action, p: Representative, bound: int = DEFAULT_CHAIN_BOUND) -> tuple[InsideTable, int]:
    """The class of ``<r;l>`` in the bounded quotient of endomorphisms ``M.A -> M.A``."""
    _need_unprimed(p.sig)
    q = reduce_rep(act, p)
    table = build_inside_table(act, p.sig.A, bound)
    return table, table.class_of(q.M, _inside_code(act, q))


# --------------------------------------------------- on-the-nose search

@dataclass(frozen=True)
class OnTheNose:
    """``status`` is ``found``, ``inconclusive`` or ``precondition``."""

    status: str
    rep: Representative | None = None
    steps: int = 0
    note: str = ""


def _choices(options: list[list[int]], limit: int) -> Iterator[tuple[int, ...]]:
    total = 1
    for o in options:
        total *= len(o)
    if total > limit:
        raise Overflow(f"{total} candidate factorisations exceed {limit}")
    return itertools.product(*options)


def _moves(act: Action, A: int, res: list, M, u: tuple, limit: int):
    """Every single slide out of ``<u>`` at ``M``.

    Yields ``(N, u2, kind, phi, k)``: ``kind = "push"`` for ``u = (phi.A);k``
    with ``phi : M -> N`` and ``u2 = k;(phi.A)`` at ``N``; ``kind = "pull"``
    for ``u = k;(phi.A)`` with ``phi : N -> M`` and ``u2 = (phi.A);k`` at ``N``.
    """
    nm = act.act_size(M, A)
    hm = act.hom_size(nm)
    for N in res:
        nn = act.act_size(N, A)
        hn = act.hom_size(nn)
        for phi in act.morphisms(M, N):
            plain = act.res_fn(phi, M, N, A)
            fixed: dict[int, int] = {}
            if all(fixed.setdefault(y, u[x]) == u[x] for x, y in enumerate(plain)):
                options = [[fixed[y]] if y in fixed else list(range(hm)) for y in range(nn)]
                fmap = act.monad.fmap(plain, nm, nn)
                for k in _choices(options, limit):
                    yield N, tuple(fmap[c] for c in k), "push", phi, k
        for phi in act.morphisms(N, M):
            plain = act.res_fn(phi, N, M, A)
            fmap = act.monad.fmap(plain, nn, nm)
            pre: dict[int, list[int]] = {}
            for c in range(hn):
                pre.setdefault(fmap[c], []).append(c)
            options = [pre.get(u[x], []) for x in range(nm)]
            if all(options):
                for k in _choices(options, limit):
                    yield N, tuple(k[y] for y in plain), "pull", phi, k


def _rewrite(act: Action, p: Representative, move) -> Representative:
    """Apply one slide of the inside chain to the representative itself."""
    N, _, kind, phi, k = move
    S, A, M = p.sig.S, p.sig.A, p.M
    nm, nn = act.act_size(M, A), act.act_size(N, A)
    if kind == "push":                                 # l' = l;(phi.A), r' = k;r
        l = act.post(act.res_fn(phi, M, N, A), p.l, nm, nn)
        r = act.hom_compose(k, p.r, nm, S)
    else:                                              # l' = l;k, r' = (phi.A);r
        l = act.hom_compose(p.l, k, nm, nn)
        r = [p.r[x] for x in act.res_fn(phi, N, M, A)]
    return Representative(p.sig, N, tuple(l), tuple(r))


def _path_to_image(act: Action, A: int, res: list, M, u: tuple, limit: int, max_nodes: int):
    """First move of a shortest chain from ``<u>`` to some ``<psi.A>``."""
    start = (M, u)
    first = {start: None}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        for move in _moves(act, A, res, node[0], node[1], limit):
            nxt = (move[0], move[1])
            if nxt in first:
                continue
            first[nxt] = first[node] if first[node] is not None else move
            if action_image(act, nxt[0], A, nxt[1]) is not None:
                return first[nxt]
            if len(first) > max_nodes:
                return None
            queue.append(nxt)
    return None


def onthenose_search(act: Action, p: Representative, steps: int = DEFAULT_SEARCH_STEPS, *,
                     bound: int = DEFAULT_CHAIN_BOUND, limit: int = 1 << 12,
                     max_nodes: int = 1 << 15) -> OnTheNose:
    """Walk towards a representative with ``r;l = psi.A`` on the nose.

    Each step finds a shortest chain of slides from ``<r;l>`` to an
    action image and transports the representative along its first slide;
    this replaces ``r;l`` by the square of the next element of the chain.
    """
    _need_unprimed(p.sig)
    if not _outside_is_identity(act, p):
        return OnTheNose("precondition", note="outside(p) is not the identity")
    A = p.sig.A
    res = chain_residuals(act, bound)
    cur = reduce_rep(act, p)
    for used in range(steps + 1):
        u = _inside_code(act, cur)
        if action_image(act, cur.M, A, u) is not None:
            return OnTheNose("found", cur, used)
        if used == steps:
            break
        if cur.M not in res:
            return OnTheNose("inconclusive", steps=used, note=f"residual {cur.M} outside bound {bound}")
        try:
            move = _path_to_image(act, A, res, cur.M, u, limit, max_nodes)
        except Overflow as exc:
            return OnTheNose("inconclusive", steps=used, note=str(exc))
        if move is None:
            return OnTheNose("inconclusive", steps=used, note=f"no chain to an action image within bound {bound}")
        cur = _rewrite(act, cur, move)
    return OnTheNose("inconclusive", steps=steps, note="step budget exhausted")


# ------------------------------------------------------------ closure

def lawful_closure_checks(act: Action, sizes: Sequence[int] = (2, 2), *,
                          chain_bound: int | None = None) -> Report:
    """Composites, unswitched tensors and diagonal images of lawful optics are lawful."""
    S, A = sizes[0], sizes[-1]
    lawful = lawful_classes(act, S, A, chain_bound=chain_bound)
    failures, checked = [], 0
    details = {"action": act.name, "sizes": [S, A], "lawful_classes": len(lawful)}
    if S == A:
        for p, q in itertools.product(lawful, repeat=2):
            checked += 1
            if not is_lawful(act, compose_optics(act, p, q), chain_bound, method="auto"):
                failures.append({"check": "compose", "outer": p.to_json(), "inner": q.to_json()})
        details["compositions"] = len(lawful) ** 2
    if _is_plain(act, ProductAction):
        F = diagonal_functor()
        F.validate()
        for p, q in itertools.product(lawful, repeat=2):
            checked += 1
            if not is_lawful(act, tensor_optics(act, p, q), chain_bound, method="auto"):
                failures.append({"check": "tensor", "left": p.to_json(), "right": q.to_json()})
        for p in lawful:
            checked += 1
            if not is_lawful(act, map_optic(act, F, p, validate=False), chain_bound, method="auto"):
                failures.append({"check": "diagonal", "optic": p.to_json()})
        details["tensors"] = len(lawful) ** 2
        details["diagonal_images"] = len(lawful)
    return Report("lawful-closure", not failures, checked, failures, details)
