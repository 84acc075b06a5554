"""Finite profunctors, Tambara modules and the profunctor form of optics.

A profunctor is tabulated on a finite universe of objects (set sizes).  Its
elements may be any hashable values; ``dimap`` acts by a pair of hom code
tables ``f : X' -> T X`` and ``g : Y -> T Y'``.  A Tambara module adds maps
``zeta_M : P(X, Y) -> P(M.X, M.Y)``, which must be evaluable on every object,
not only on the universe, because ``M.X`` usually leaves it.

The canonical module ``Phi(E_{A,A'})`` has the optics ``(X, Y) -> (A, A')`` as
elements.  Each class is stored as its normal form (the canonical
representative of its concrete optic), so equality of elements is equality of
classes on every signature without building a table.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterator, Sequence

from .action import Action
from .caps import default_caps
from .concrete import abstractify, concretize
from .errors import AuditFailure, OutOfTable, SignatureMismatch
from .laws import (DEFAULT_CHAIN_BOUND, ChainRep, _has_invariant, chain_invariant,
                   chain_residuals, get_chain_table, reduce_chain)
from .optic_core import (OpticSignature, Representative, compose_optics, get_table,
                         identity_optic, invert_table, reduce_rep)

__all__ = [
    "FiniteProfunctor", "ExchangeModule", "HomProfunctor", "TambaraStructure",
    "TambaraReport", "ProfOptic", "ComonoidReport", "phi_exchange", "hom_module",
    "mutate_zeta", "normal_form", "optic_to_profunctor", "profunctor_to_optic",
    "profunctor_to_rep", "exchange_morphism", "comonoid_epsilon", "comonoid_delta",
    "counit_left", "counit_right", "square_image", "comonoid_report",
    "is_comonoid_homomorphism", "default_universe",
]

Elem = Hashable


def default_universe(*sizes: int) -> tuple[int, ...]:
    """Object sizes up to the ``universe`` cap plus the given ones."""
    return tuple(sorted({*range(default_caps().universe + 1), *sizes}))


def _maps(a: int, b: int) -> Iterator[tuple[int, ...]]:
    return itertools.product(range(b), repeat=a)


# -------------------------------------------------------------- profunctors

class FiniteProfunctor:
    """Base class: ``elements`` on the universe and ``dimap`` everywhere."""

    name = "profunctor"

    def __init__(self, act: Action, universe: Sequence[int]):
        self.act = act
        self.universe = tuple(sorted(set(int(x) for x in universe)))

    def elements(self, X: int, Y: int) -> list[Elem]:
        raise NotImplementedError

    def dimap(self, X: int, Y: int, Xp: int, Yp: int, f: Sequence[int], g: Sequence[int],
              x: Elem) -> Elem:
        """``P(f, g) x`` for ``f : Xp -> T X`` and ``g : Y -> T Yp``."""
        raise NotImplementedError

    def value_size(self, X: int, Y: int) -> int:
        return len(self.elements(X, Y))

    def plain(self, f: Sequence[int], m: int) -> tuple[int, ...]:
        return tuple(self.act.pure(f, m))


class ExchangeModule(FiniteProfunctor):
    """``Phi(E_{A,A'})``: optics ``(X, Y) -> (A, A')`` as normal forms."""

    name = "phi-exchange"

    def __init__(self, act: Action, A: int, Ap: int, universe: Sequence[int], bound: int | None = None):
        super().__init__(act, universe)
        self.A, self.Ap = int(A), int(Ap)
        self.bound = bound
        self._elems: dict[tuple[int, int], list[Elem]] = {}

    def sig(self, X: int, Y: int) -> OpticSignature:
        return OpticSignature(X, Y, self.A, self.Ap)

    def normal(self, rep: Representative) -> Representative:
        return normal_form(self.act, rep)

    def elements(self, X, Y):
        key = (X, Y)
        if key not in self._elems:
            table = get_table(self.act, self.sig(X, Y), self.bound)
            self._elems[key] = [self.normal(c) for c in table.canons()]
        return self._elems[key]

    def class_id(self, x: Representative) -> int:
        table = get_table(self.act, x.sig, self.bound)
        try:
            return table.class_of(x)
        except OutOfTable:
            return table.class_of(reduce_rep(self.act, x))

    def dimap(self, X, Y, Xp, Yp, f, g, x):
        act, M = self.act, x.M
        l = act.hom_compose(f, x.l, X, act.act_size(M, self.A))
        r = act.hom_compose(x.r, g, Y, Yp)
        return self.normal(Representative(self.sig(Xp, Yp), M, tuple(l), tuple(r)))

    def identity_element(self) -> Representative:
        return self.normal(identity_optic(self.act, self.A, self.Ap))


class HomProfunctor(FiniteProfunctor):
    """``C(X, Y)`` with elements hom code tables."""

    name = "hom"

    def elements(self, X, Y):
        return list(_maps(X, self.act.hom_size(Y)))

    def dimap(self, X, Y, Xp, Yp, f, g, x):
        act = self.act
        return tuple(act.hom_compose(act.hom_compose(f, x, X, Y), g, Y, Yp))


def normal_form(act: Action, rep: Representative) -> Representative:
    """The canonical representative of the class of ``rep``."""
    return abstractify(act, concretize(act, rep))


# ------------------------------------------------------------ Tambara modules

@dataclass
class TambaraReport:
    """Pass/fail cell counts for each square of the Tambara definition."""

    name: str
    cells: dict[str, list[int]] = field(default_factory=dict)
    examples: dict[str, list] = field(default_factory=dict)

    def record(self, square: str, ok: bool, witness=None) -> None:
        counts = self.cells.setdefault(square, [0, 0])
        counts[0 if ok else 1] += 1
        if not ok and witness is not None:
            self.examples.setdefault(square, [])
            if len(self.examples[square]) < 3:
                self.examples[square].append(witness)

    @property
    def ok(self) -> bool:
        return all(fail == 0 for _, fail in self.cells.values())

    def failed(self) -> list[str]:
        return [k for k, (_, fail) in self.cells.items() if fail]

    def to_json(self) -> dict:
        return {"name": self.name, "ok": self.ok,
                "squares": {k: {"pass": p, "fail": f} for k, (p, f) in self.cells.items()},
                "examples": {k: [str(w) for w in v] for k, v in self.examples.items()}}


class TambaraStructure:
    """A profunctor with structure maps ``zeta``."""

    def __init__(self, base: FiniteProfunctor, zeta: Callable[[tuple, int, int, Elem], Elem],
                 bound: int = 2, name: str | None = None):
        self.base, self.zeta_fn, self.bound = base, zeta, bound
        self.act = base.act
        self.name = name or base.name
        self._zcache: dict = {}
        self._dcache: dict = {}

    @property
    def universe(self) -> tuple[int, ...]:
        return self.base.universe

    def residuals(self) -> list:
        return chain_residuals(self.act, self.bound)

    def zeta(self, M, X: int, Y: int, x: Elem) -> Elem:
        key = (tuple(M), X, Y, x)
        if key not in self._zcache:
            self._zcache[key] = self.zeta_fn(tuple(M), X, Y, x)
        return self._zcache[key]

    def dimap(self, X, Y, Xp, Yp, f, g, x) -> Elem:
        key = (X, Y, Xp, Yp, tuple(f), tuple(g), x)
        if key not in self._dcache:
            self._dcache[key] = self.base.dimap(X, Y, Xp, Yp, f, g, x)
        return self._dcache[key]

    # validation -----------------------------------------------------
    def validate(self) -> TambaraReport:
        """Check every square over the universe and residuals up to ``bound``."""
        rep = TambaraReport(self.name)
        self._check_profunctor(rep)
        self._check_naturality(rep)
        self._check_dinaturality(rep)
        self._check_tensor(rep)
        self._check_unit(rep)
        return rep

    def _plain_legs(self):
        """All ``(X, X', f : X' -> X)`` over the universe with ``f`` as hom codes."""
        U, pure = self.universe, self.base.plain
        for X in U:
            for Xp in U:
                for f in _maps(Xp, X):
                    yield X, Xp, f, pure(f, X)

    def _check_profunctor(self, rep: TambaraReport) -> None:
        act, U = self.act, self.universe
        for X in U:
            for Y in U:
                idx, idy = act.hom_identity(X), act.hom_identity(Y)
                for x in self.base.elements(X, Y):
                    rep.record("identity", self.dimap(X, Y, X, Y, idx, idy, x) == x, (X, Y, x))
        legs = list(self._plain_legs())
        by_cod: dict[int, list] = {}
        for X, Xp, f, hf in legs:
            by_cod.setdefault(X, []).append((Xp, f, hf))
        # f : X1 -> X, f2 : X2 -> X1 and g : Y -> Y1, g2 : Y1 -> Y2
        for X, Y in itertools.product(U, U):
            elems = self.base.elements(X, Y)
            if not elems:
                continue
            for X1, f, hf in by_cod[X]:
                for X2, f2, hf2 in by_cod[X1]:
                    ff = self.base.plain([f[t] for t in f2], X)
                    for Y1, g, hg in (t for t in _cod_legs(legs, Y)):
                        for Y2, g2, hg2 in (t for t in _cod_legs(legs, Y1)):
                            gg = self.base.plain([g2[t] for t in g], Y2)
                            for x in elems:
                                once = self.dimap(X, Y, X1, Y1, hf, hg, x)
                                two = self.dimap(X1, Y1, X2, Y2, hf2, hg2, once)
                                rep.record("composition",
                                           two == self.dimap(X, Y, X2, Y2, ff, gg, x), (f, f2, g, g2))

    def _check_naturality(self, rep: TambaraReport) -> None:
        act, U = self.act, self.universe
        legs = list(self._plain_legs())
        for M in self.residuals():
            for X, Xp, f, hf in legs:
                Mf = act.act_hom(M, hf, Xp, X)
                for Y, Yp, g in _dom_legs(U):
                    hg = self.base.plain(g, Yp)
                    Mg = act.act_hom(M, hg, Y, Yp)
                    mx, my = act.act_size(M, X), act.act_size(M, Y)
                    mxp, myp = act.act_size(M, Xp), act.act_size(M, Yp)
                    for x in self.base.elements(X, Y):
                        lhs = self.zeta(M, Xp, Yp, self.dimap(X, Y, Xp, Yp, hf, hg, x))
                        rhs = self.dimap(mx, my, mxp, myp, Mf, Mg, self.zeta(M, X, Y, x))
                        rep.record("naturality", lhs == rhs, (M, f, g, x))

    def _check_dinaturality(self, rep: TambaraReport) -> None:
        act, U = self.act, self.universe
        res = self.residuals()
        for M, N in itertools.product(res, res):
            for phi in act.morphisms(M, N):
                for X, Y in itertools.product(U, U):
                    mx, my = act.act_size(M, X), act.act_size(M, Y)
                    nx, ny = act.act_size(N, X), act.act_size(N, Y)
                    phx = self.base.plain(act.res_fn(phi, M, N, X), nx)
                    phy = self.base.plain(act.res_fn(phi, M, N, Y), ny)
                    for x in self.base.elements(X, Y):
                        lhs = self.dimap(mx, my, mx, ny, act.hom_identity(mx), phy, self.zeta(M, X, Y, x))
                        rhs = self.dimap(nx, ny, mx, ny, phx, act.hom_identity(ny), self.zeta(N, X, Y, x))
                        rep.record("dinaturality", lhs == rhs, (M, N, phi, x))

    def _check_tensor(self, rep: TambaraReport) -> None:
        act, U = self.act, self.universe
        res = self.residuals()
        for M, N in itertools.product(res, res):
            NM = act.tensor(N, M)
            for X, Y in itertools.product(U, U):
                mx, my = act.act_size(M, X), act.act_size(M, Y)
                nmx, nmy = act.act_size(NM, X), act.act_size(NM, Y)
                # (N (x) M).Z -> N.(M.Z) on both sides
                to_x = self.base.plain(invert_table(act.mediator(N, M, X)), nmx)
                to_y = self.base.plain(act.mediator(N, M, Y), nmy)
                for x in self.base.elements(X, Y):
                    nested = self.zeta(N, mx, my, self.zeta(M, X, Y, x))
                    direct = self.dimap(nmx, nmy, nmx, nmy, to_x, to_y, self.zeta(NM, X, Y, x))
                    rep.record("tensor", nested == direct, (M, N, x))

    def _check_unit(self, rep: TambaraReport) -> None:
        act, U, I = self.act, self.universe, self.act.unit
        for X, Y in itertools.product(U, U):
            ix, iy = act.act_size(I, X), act.act_size(I, Y)
            lam_inv = self.base.plain(invert_table(act.unitor(X)), ix)
            lam = self.base.plain(act.unitor(Y), Y)
            for x in self.base.elements(X, Y):
                back = self.dimap(ix, iy, X, Y, lam_inv, lam, self.zeta(I, X, Y, x))
                rep.record("unit", back == x, (X, Y, x))


def _cod_legs(legs, Y: int):
    """``(Y', g, hom g)`` for every plain ``g : Y -> Y'``."""
    for Yp, Y0, g, hg in legs:
        if Y0 == Y:
            yield Yp, g, hg


def _dom_legs(U):
    for Y in U:
        for Yp in U:
            for g in _maps(Y, Yp):
                yield Y, Yp, g


def _tautological(act: Action, M, X: int, Y: int) -> Representative:
    """``<id | id> : (M.X, M.Y) -> (X, Y)`` with residual ``M``."""
    mx, my = act.act_size(M, X), act.act_size(M, Y)
    return Representative(OpticSignature(mx, my, X, Y), tuple(M),
                          tuple(act.hom_identity(mx)), tuple(act.hom_identity(my)))


def phi_exchange(act: Action, A: int, Ap: int, universe: Sequence[int] | None = None,
                 bound: int = 2, *, table_bound: int | None = None) -> TambaraStructure:
    """The Tambara module ``Phi(E_{A,A'})``.

    ``zeta_M <l|r> = <M.l | M.r>`` re-indexed along the mediator, which is
    the composite of ``<l|r>`` with the tautological optic of residual ``M``.
    """
    U = default_universe(A, Ap) if universe is None else universe
    base = ExchangeModule(act, A, Ap, U, table_bound)

    def zeta(M, X, Y, x):
        return base.normal(compose_optics(act, x, _tautological(act, M, X, Y)))

    return TambaraStructure(base, zeta, bound, f"phi-exchange({A},{Ap})")


def hom_module(act: Action, universe: Sequence[int] | None = None, bound: int = 2) -> TambaraStructure:
    """The hom profunctor with ``zeta_M h = M.h``."""
    base = HomProfunctor(act, default_universe() if universe is None else universe)

    def zeta(M, X, Y, h):
        return tuple(act.act_hom(M, h, X, Y))

    return TambaraStructure(base, zeta, bound, "hom")


def mutate_zeta(T: TambaraStructure, M=None) -> TambaraStructure:
    """A copy of ``T`` whose ``zeta`` at residual ``M`` (default: the unit) is corrupted.

    Inside the universe the corrupted map sends every element to the first
    element of its target; the unit square fails as soon as some ``P(X, Y)``
    in the universe has two elements.
    """
    bad = tuple(T.act.unit if M is None else M)
    act = T.act

    def zeta(N, X, Y, x):
        y = T.zeta(N, X, Y, x)
        if tuple(N) != bad:
            return y
        nx, ny = act.act_size(N, X), act.act_size(N, Y)
        if nx not in T.universe or ny not in T.universe:
            return y
        targets = T.base.elements(nx, ny)
        return targets[0] if len(targets) > 1 else y

    return TambaraStructure(T.base, zeta, T.bound, f"{T.name}/mutated{list(bad)}")


# --------------------------------------------------------- profunctor optics

@dataclass(frozen=True)
class ProfOptic:
    """A transformation ``(U-)(A, A') => (U-)(S, S')`` stored by its value on ``Phi(E)``.

    ``value`` is the image of the identity optic under the component at
    ``Phi(E_{A,A'})``; on any other module the transformation is replayed as
    ``P(l, r) . zeta_M`` with ``<l|r> = value``.
    """

    act: Action
    sig: OpticSignature
    value: Representative

    def evaluate(self, module: TambaraStructure, x: Elem) -> Elem:
        act, v = self.act, self.value
        S, Sp, A, Ap = self.sig.sizes
        y = module.zeta(v.M, A, Ap, x)
        return module.dimap(act.act_size(v.M, A), act.act_size(v.M, Ap), S, Sp, v.l, v.r, y)

    def to_json(self) -> dict:
        return {"action": self.act.name, "sig": self.sig.to_json(), "value": self.value.to_json()}


_PHI_CACHE: dict = {}


def _phi(act: Action, A: int, Ap: int) -> TambaraStructure:
    key = (act.key, A, Ap)
    if key not in _PHI_CACHE:
        _PHI_CACHE[key] = phi_exchange(act, A, Ap)
    return _PHI_CACHE[key]


def optic_to_profunctor(act: Action, p: Representative) -> ProfOptic:
    """``p~_P = P(l, r) . zeta_M``, stored by its value on the identity optic of ``Phi(E)``."""
    S, Sp, A, Ap = p.sig.sizes
    module = _phi(act, A, Ap)
    x = module.base.identity_element()
    y = module.zeta(p.M, A, Ap, x)
    value = module.dimap(act.act_size(p.M, A), act.act_size(p.M, Ap), S, Sp, p.l, p.r, y)
    return ProfOptic(act, p.sig, value)


def profunctor_to_rep(t: ProfOptic) -> Representative:
    """``t`` evaluated at the identity optic of ``Phi(E_{A,A'})``."""
    module = _phi(t.act, t.sig.A, t.sig.Ap)
    return t.evaluate(module, module.base.identity_element())


def profunctor_to_optic(t: ProfOptic) -> int:
    """The class id (in the optic table of ``t.sig``) that ``t`` comes from."""
    module = _phi(t.act, t.sig.A, t.sig.Ap)
    return module.base.class_id(profunctor_to_rep(t))


def exchange_morphism(act: Action, f: Sequence[int], g: Sequence[int], B: int, Bp: int,
                      C: int, Cp: int) -> Callable[[Representative], Representative]:
    """The module map ``Phi(E_{B,B'}) -> Phi(E_{C,C'})`` induced by plain ``f : B -> C``, ``g : C' -> B'``."""
    from .finset import FiniteFunction
    from .optic_core import iota
    leg = iota(act, FiniteFunction(B, C, f), FiniteFunction(Cp, Bp, g))

    def apply(x: Representative) -> Representative:
        return normal_form(act, compose_optics(act, leg, x))

    return apply


# ---------------------------------------------------------------- comonoids

def _need_square(sig: OpticSignature) -> None:
    if sig.A != sig.Ap:
        raise SignatureMismatch(f"the comonoid structure needs A = A', got {sig.sizes}")


def comonoid_epsilon(act: Action, x: Representative) -> tuple[int, ...]:
    """``eps <l|r> = r.l : X -> T Y`` as a hom code table."""
    _need_square(x.sig)
    return tuple(act.hom_compose(x.l, x.r, act.act_size(x.M, x.sig.A), x.sig.Sp))


def comonoid_delta(act: Action, x: Representative) -> ChainRep:
    """``Delta <l|r> = <l | id | r>`` in the two-fold composite of ``Phi(E)``."""
    _need_square(x.sig)
    n = act.act_size(x.M, x.sig.A)
    return ChainRep(x.sig, x.M, x.M, x.l, tuple(act.hom_identity(n)), x.r)


def counit_left(act: Action, ch: ChainRep) -> Representative:
    """``(eps (.) id) <l|c|r> = <c.l | r>``."""
    A = ch.sig.A
    l = act.hom_compose(ch.l, ch.c, act.act_size(ch.M1, A), act.act_size(ch.M2, A))
    return Representative(ch.sig, ch.M2, tuple(l), ch.r)


def counit_right(act: Action, ch: ChainRep) -> Representative:
    """``(id (.) eps) <l|c|r> = <l | r.c>``."""
    A = ch.sig.A
    r = act.hom_compose(ch.c, ch.r, act.act_size(ch.M2, A), ch.sig.Sp)
    return Representative(ch.sig, ch.M1, ch.l, tuple(r))


def _whiskers(act: Action, p: Representative, N):
    """``(N.l)`` into ``(N (x) M).A`` and ``(N.r)`` out of it, as hom tables."""
    S, A, M = p.sig.S, p.sig.A, p.M
    ns, nma = act.act_size(N, S), act.act_size(M, A)
    NM = act.tensor(N, M)
    size = act.act_size(NM, A)
    lifted = act.act_hom(N, p.l, S, nma)
    L = act.post(invert_table(act.mediator(N, M, A)), lifted, act.act_size(N, nma), size)
    lifted_r = act.act_hom(N, p.r, nma, S)
    R = [lifted_r[y] for y in act.mediator(N, M, A)]
    return NM, tuple(L), tuple(R), ns, size


def square_image(act: Action, p: Representative, ch: ChainRep) -> ChainRep:
    """``(t (.) t) <f|c|g>`` for the transformation ``t`` of ``p``.

    Both factors are composed with ``p``:
    ``<(N1.l) f | (N2.l) c (N1.r) | g (N2.r)>`` over residuals ``N1 (x) M``
    and ``N2 (x) M``.
    """
    X, Y, S = ch.sig.S, ch.sig.Sp, p.sig.S
    if (ch.sig.A, ch.sig.Ap) != (S, p.sig.Sp):
        raise SignatureMismatch(f"chain {ch.sig.sizes} does not end at {p.sig.sizes}")
    K1, L1, R1, n1s, k1 = _whiskers(act, p, ch.M1)
    K2, L2, R2, n2s, k2 = _whiskers(act, p, ch.M2)
    l = act.hom_compose(ch.l, L1, n1s, k1)
    c = act.hom_compose(act.hom_compose(R1, ch.c, n1s, n2s), L2, n2s, k2)
    r = act.hom_compose(R2, ch.r, n2s, Y)
    sig = OpticSignature(X, Y, p.sig.A, p.sig.Ap)
    return ChainRep(sig, K1, K2, tuple(l), tuple(c), tuple(r))


def _chains_equal(act: Action, a: ChainRep, b: ChainRep, chain_bound: int) -> bool | None:
    """Equality in the two-fold composite; ``None`` when neither route applies."""
    a, b = reduce_chain(act, a), reduce_chain(act, b)
    if a == b:
        return True
    invariant = _has_invariant(act)
    try:
        table = get_chain_table(act, a.sig, chain_bound)
        same = table.class_of(a) == table.class_of(b)
    except OutOfTable:
        same = None
    if same is None:
        return chain_invariant(act, a) == chain_invariant(act, b) if invariant else None
    if not same and invariant and chain_invariant(act, a) == chain_invariant(act, b):
        raise AuditFailure(f"chains agree on the invariant but are not joined at bound {chain_bound}")
    return same


@dataclass(frozen=True)
class ComonoidReport:
    """Both squares at the traced element, plus the audit over all small elements."""

    traced_epsilon: bool
    traced_delta: bool
    audit_checked: int
    audit_failures: int
    audit_skipped: int
    divergence: bool
    note: str = ""

    @property
    def homomorphism(self) -> bool:
        return self.traced_epsilon and self.traced_delta

    def to_json(self) -> dict:
        return {"homomorphism": self.homomorphism, "traced_epsilon": self.traced_epsilon,
                "traced_delta": self.traced_delta, "audit_checked": self.audit_checked,
                "audit_failures": self.audit_failures, "audit_skipped": self.audit_skipped,
                "divergence": self.divergence, "note": self.note}


def _squares(act: Action, p: Representative, x: Representative, chain_bound: int):
    """``(eps square, Delta square)`` for ``t`` of ``p`` at element ``x : (X,Y) -> (S,S)``."""
    tx = compose_optics(act, p, x)
    eps_ok = comonoid_epsilon(act, tx) == comonoid_epsilon(act, x)
    delta_ok = _chains_equal(act, comonoid_delta(act, tx),
                             square_image(act, p, comonoid_delta(act, x)), chain_bound)
    return eps_ok, delta_ok


def comonoid_report(act: Action, p: Representative, bound: int | None = None, *,
                    audit: bool = True, universe: Sequence[int] | None = None) -> ComonoidReport:
    """Check that ``t`` of ``p`` preserves ``eps`` and ``Delta``.

    ``bound`` is the chain bound of the two-fold composite.  The traced
    element is the identity optic at ``(S, S)``; the audit runs both squares
    on every class ``(X, Y) -> (S, S)`` with ``X, Y`` in the universe.
    """
    if not p.sig.unprimed:
        raise SignatureMismatch(f"comonoid homomorphisms need S = S' and A = A', got {p.sig.sizes}")
    chain_bound = DEFAULT_CHAIN_BOUND if bound is None else bound
    S = p.sig.S
    eps0, delta0 = _squares(act, p, identity_optic(act, S, S), chain_bound)
    if delta0 is None:
        raise AuditFailure(f"the traced square of {p.sig.sizes} could not be decided")
    traced = eps0 and delta0
    checked = failures = skipped = 0
    if audit:
        U = default_universe() if universe is None else universe
        for X, Y in itertools.product(U, U):
            table = get_table(act, OpticSignature(X, Y, S, S))
            for x in table.canons():
                e, d = _squares(act, p, x, chain_bound)
                if d is None:
                    skipped += 1
                    continue
                checked += 1
                failures += not (e and d)
    divergence = audit and traced and failures > 0
    note = "audit finds failures the traced element misses" if divergence else ""
    return ComonoidReport(eps0, bool(delta0), checked, failures, skipped, divergence, note)


def is_comonoid_homomorphism(act: Action, p: Representative, bound: int | None = None, *,
                             audit: bool = False) -> bool:
    return comonoid_report(act, p, bound, audit=audit).homomorphism
