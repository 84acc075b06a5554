"""Concrete optics: every variant's coend-free form, conversions and composition.

All values are finite tables over the canonical encodings of ``finset``:

* ``Lens``: ``get : S -> A`` and ``put : S x A' -> S'``
* ``Prism``: ``matching : S -> S' + A`` and ``review : A' -> S'``
* ``Iso``: ``to : S -> A`` and ``frm : A' -> S'``
* ``Affine``: ``step : S -> S' + (S'^A' x A)``
* ``Linear``: ``unzip : S -> S'^A' x A``
* ``Traversal``: ``unzip : S -> FunList(A, A', S')``
* ``Setter``: ``over : A'^A -> S'^S``
* ``Grate``: ``grate : A'^(A^S) -> S'``
* ``Achromatic``: ``opt : S -> S'^A' + 1``, ``get : S -> A``, ``create : A' -> S'``
* ``WriterLens``: Kleisli ``get : S -> A x W`` and ``put : S x A' -> S' x W``
* ``StatefulLens``: ``mget : S -> T_Q A`` and ``mput : S x Q x A' -> T_Q S'``

``concretize`` and ``abstractify`` cross between these and representatives of
the matching action.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, ClassVar, Sequence

from .action import (Action, ProductAction, StateAction, StateMonad, WriterAction, WriterMonad,
                     make_action)
from .caps import check_cap, default_caps
from .errors import (DomainMismatch, KindMismatch, NoCommonKind, NotAbove, Overflow,
                     SignatureMismatch, StateMismatch, UnsupportedAction)
from .finset import exp_decode, exp_encode
from .optic_core import OpticSignature, Representative

__all__ = [
    "ConcreteOptic", "Lens", "Prism", "Iso", "Affine", "Linear", "Traversal",
    "FunList", "Setter", "Grate", "Achromatic", "WriterLens", "StatefulLens",
    "KINDS", "concrete_kind", "concretize", "abstractify", "compose_concrete",
    "convert", "compose_stateful", "join_kind", "is_above", "from_json",
    "lens_to_linear", "linear_to_lens", "coordinate_traversal", "action_for",
    "concrete_count", "ComplementSplit", "constant_complement",
]


def _sig(sig) -> OpticSignature:
    return sig if isinstance(sig, OpticSignature) else OpticSignature(*sig)


def _check(table: Sequence[int], length: int, bound: int, what: str) -> tuple[int, ...]:
    table = tuple(int(x) for x in table)
    if len(table) != length or any(not 0 <= x < bound for x in table):
        raise DomainMismatch(f"{what} does not typecheck (length {length}, values < {bound})")
    return table


class ConcreteOptic:
    """Common interface: a ``kind`` tag, a signature and JSON round-trips."""

    kind: ClassVar[str] = "abstract"
    sig: OpticSignature
    _fields: ClassVar[tuple[str, ...]] = ()

    def to_json(self) -> dict:
        out = {"kind": self.kind, "sig": self.sig.to_json()}
        for name in self._fields:
            value = getattr(self, name)
            out[name] = _jsonable(value)
        return out


def _jsonable(value):
    if isinstance(value, tuple):
        return [_jsonable(v) for v in value]
    if isinstance(value, FunList):
        return value.to_json()
    return value


# ------------------------------------------------------------- the forms

@dataclass(frozen=True)
class Lens(ConcreteOptic):
    sig: OpticSignature
    get: tuple[int, ...]
    put: tuple[int, ...]   # index s * |A'| + a'

    kind: ClassVar[str] = "lens"
    _fields: ClassVar[tuple[str, ...]] = ("get", "put")

    def __post_init__(self):
        S, Sp, A, Ap = self.sig.sizes
        object.__setattr__(self, "get", _check(self.get, S, A, "get"))
        object.__setattr__(self, "put", _check(self.put, S * Ap, Sp, "put"))

    @classmethod
    def from_functions(cls, sig, get: Callable[[int], int], put: Callable[[int, int], int]) -> "Lens":
        sig = _sig(sig)
        return cls(sig, [get(s) for s in range(sig.S)],
                   [put(s, a) for s in range(sig.S) for a in range(sig.Ap)])

    def view(self, s: int) -> int:
        return self.get[s]

    def update(self, s: int, a: int) -> int:
        return self.put[s * self.sig.Ap + a]


@dataclass(frozen=True)
class Prism(ConcreteOptic):
    sig: OpticSignature
    matching: tuple[int, ...]   # inl s' = s', inr a = |S'| + a
    review: tuple[int, ...]

    kind: ClassVar[str] = "prism"
    _fields: ClassVar[tuple[str, ...]] = ("matching", "review")

    def __post_init__(self):
        S, Sp, A, Ap = self.sig.sizes
        object.__setattr__(self, "matching", _check(self.matching, S, Sp + A, "matching"))
        object.__setattr__(self, "review", _check(self.review, Ap, Sp, "review"))

    def match(self, s: int) -> tuple[int, int]:
        """``(0, s')`` for a miss and ``(1, a)`` for a hit."""
        c, Sp = self.matching[s], self.sig.Sp
        return (0, c) if c < Sp else (1, c - Sp)


@dataclass(frozen=True)
class Iso(ConcreteOptic):
    sig: OpticSignature
    to: tuple[int, ...]
    frm: tuple[int, ...]

    kind: ClassVar[str] = "iso"
    _fields: ClassVar[tuple[str, ...]] = ("to", "frm")

    def __post_init__(self):
        S, Sp, A, Ap = self.sig.sizes
        object.__setattr__(self, "to", _check(self.to, S, A, "to"))
        object.__setattr__(self, "frm", _check(self.frm, Ap, Sp, "from"))


@dataclass(frozen=True)
class Affine(ConcreteOptic):
    sig: OpticSignature
    step: tuple[int, ...]   # inl s' = s', inr(h, a) = |S'| + h * |A| + a

    kind: ClassVar[str] = "affine"
    _fields: ClassVar[tuple[str, ...]] = ("step",)

    def __post_init__(self):
        S, Sp, A, Ap = self.sig.sizes
        object.__setattr__(self, "step", _check(self.step, S, Sp + Sp ** Ap * A, "step"))

    def case(self, s: int):
        """``(0, s')`` or ``(1, h, a)`` with ``h`` decoded to a tuple."""
        S, Sp, A, Ap = self.sig.sizes
        c = self.step[s]
        if c < Sp:
            return (0, c)
        h, a = divmod(c - Sp, A)
        return (1, exp_decode(h, Sp, Ap), a)


@dataclass(frozen=True)
class Linear(ConcreteOptic):
    sig: OpticSignature
    unzip: tuple[int, ...]   # (h, a) = h * |A| + a, h in S'^A'

    kind: ClassVar[str] = "linear"
    _fields: ClassVar[tuple[str, ...]] = ("unzip",)

    def __post_init__(self):
        S, Sp, A, Ap = self.sig.sizes
        object.__setattr__(self, "unzip", _check(self.unzip, S, Sp ** Ap * A, "unzip"))

    def split(self, s: int) -> tuple[tuple[int, ...], int]:
        S, Sp, A, Ap = self.sig.sizes
        h, a = divmod(self.unzip[s], A)
        return exp_decode(h, Sp, Ap), a


@dataclass(frozen=True)
class FunList:
    """One element of ``sum_n A^n x (A'^n -> S')``; ``k`` is indexed by product codes."""

    n: int
    focus: tuple[int, ...]
    k: tuple[int, ...]

    def to_json(self) -> dict:
        return {"n": self.n, "focus": list(self.focus), "k": list(self.k)}

    @classmethod
    def from_json(cls, d) -> "FunList":
        return cls(int(d["n"]), tuple(d["focus"]), tuple(d["k"]))

    def rebuild(self, values: Sequence[int], base: int) -> int:
        code = 0
        for v in values:
            code = code * base + v
        return self.k[code]


@dataclass(frozen=True)
class Traversal(ConcreteOptic):
    sig: OpticSignature
    branches: tuple[FunList, ...]
    cap: int = field(default=-1, compare=False)

    kind: ClassVar[str] = "traversal"
    _fields: ClassVar[tuple[str, ...]] = ("branches",)

    def __post_init__(self):
        S, Sp, A, Ap = self.sig.sizes
        cap = default_caps().funlist if self.cap < 0 else self.cap
        object.__setattr__(self, "cap", cap)
        bs = tuple(b if isinstance(b, FunList) else FunList.from_json(b) for b in self.branches)
        if len(bs) != S:
            raise DomainMismatch("one FunList branch per element of S")
        for b in bs:
            check_cap(b.n, cap, "FunList length")
            _check(b.focus, b.n, A, "focus")
            _check(b.k, Ap ** b.n, Sp, "rebuild")
        object.__setattr__(self, "branches", bs)

    def to_json(self) -> dict:
        return {"kind": self.kind, "sig": self.sig.to_json(),
                "branches": [b.to_json() for b in self.branches]}


@dataclass(frozen=True)
class Setter(ConcreteOptic):
    sig: OpticSignature
    over: tuple[int, ...]   # code of f : A -> A' maps to code of S -> S'

    kind: ClassVar[str] = "setter"
    _fields: ClassVar[tuple[str, ...]] = ("over",)

    def __post_init__(self):
        S, Sp, A, Ap = self.sig.sizes
        object.__setattr__(self, "over", _check(self.over, Ap ** A, Sp ** S, "over"))

    def apply(self, f: Sequence[int]) -> tuple[int, ...]:
        S, Sp, A, Ap = self.sig.sizes
        return exp_decode(self.over[exp_encode(f, Ap)], Sp, S)


@dataclass(frozen=True)
class Grate(ConcreteOptic):
    sig: OpticSignature
    grate: tuple[int, ...]   # code of k : A^S -> A' maps to S'

    kind: ClassVar[str] = "grate"
    _fields: ClassVar[tuple[str, ...]] = ("grate",)

    def __post_init__(self):
        S, Sp, A, Ap = self.sig.sizes
        object.__setattr__(self, "grate", _check(self.grate, Ap ** (A ** S), Sp, "grate"))


@dataclass(frozen=True)
class Achromatic(ConcreteOptic):
    sig: OpticSignature
    opt: tuple[int, ...]     # h in S'^A', or |S'|^|A'| for the missing case
    get: tuple[int, ...]
    create: tuple[int, ...]

    kind: ClassVar[str] = "achromatic"
    _fields: ClassVar[tuple[str, ...]] = ("opt", "get", "create")

    def __post_init__(self):
        S, Sp, A, Ap = self.sig.sizes
        object.__setattr__(self, "opt", _check(self.opt, S, Sp ** Ap + 1, "opt"))
        object.__setattr__(self, "get", _check(self.get, S, A, "get"))
        object.__setattr__(self, "create", _check(self.create, Ap, Sp, "create"))


@dataclass(frozen=True)
class WriterLens(ConcreteOptic):
    sig: OpticSignature
    monoid: tuple[tuple[int, ...], ...]
    get: tuple[int, ...]   # a * |W| + w
    put: tuple[int, ...]   # index s * |A'| + a', value s' * |W| + w

    kind: ClassVar[str] = "writer"
    _fields: ClassVar[tuple[str, ...]] = ("monoid", "get", "put")

    def __post_init__(self):
        S, Sp, A, Ap = self.sig.sizes
        monoid = tuple(tuple(int(x) for x in row) for row in self.monoid)
        object.__setattr__(self, "monoid", monoid)
        w = WriterMonad(monoid).w
        object.__setattr__(self, "get", _check(self.get, S, A * w, "get"))
        object.__setattr__(self, "put", _check(self.put, S * Ap, Sp * w, "put"))


@dataclass(frozen=True)
class StatefulLens(ConcreteOptic):
    sig: OpticSignature
    q: int
    mget: tuple[int, ...]   # state-monad codes in T_Q A
    mput: tuple[int, ...]   # index (s * |Q| + q) * |A'| + a', codes in T_Q S'

    kind: ClassVar[str] = "stateful"
    _fields: ClassVar[tuple[str, ...]] = ("q", "mget", "mput")

    def __post_init__(self):
        S, Sp, A, Ap = self.sig.sizes
        T = StateMonad(self.q)
        object.__setattr__(self, "mget", _check(self.mget, S, T.size(A), "mget"))
        object.__setattr__(self, "mput", _check(self.mput, S * self.q * Ap, T.size(Sp), "mput"))

    @property
    def monad(self) -> StateMonad:
        return StateMonad(self.q)

    def run_get(self, s: int, q0: int) -> tuple[int, int]:
        return self.monad.run(self.mget[s], self.sig.A, q0)

    def run_put(self, s: int, q: int, a: int, q0: int) -> tuple[int, int]:
        code = self.mput[(s * self.q + q) * self.sig.Ap + a]
        return self.monad.run(code, self.sig.Sp, q0)


KINDS = {c.kind: c for c in (Lens, Prism, Iso, Affine, Linear, Traversal, Setter, Grate,
                              Achromatic, WriterLens, StatefulLens)}


def from_json(data: dict) -> ConcreteOptic:
    kind = data.get("kind")
    if kind not in KINDS:
        raise KindMismatch(f"unknown concrete kind {kind!r}")
    sig = OpticSignature.from_json(data["sig"])
    if kind == "traversal":
        return Traversal(sig, tuple(FunList.from_json(b) for b in data["branches"]))
    cls = KINDS[kind]
    kw = {}
    for name in cls._fields:
        v = data[name]
        kw[name] = tuple(tuple(r) for r in v) if name == "monoid" else (v if name == "q" else tuple(v))
    return cls(sig, **kw)


# ------------------------------------------------------ concretization

_ACTION_KIND = {"lens": "lens", "prism": "prism", "iso": "iso", "affine": "affine",
                "achromatic": "achromatic", "grate": "grate", "writer": "writer",
                "state": "stateful"}


def concrete_kind(act: Action) -> str:
    return _ACTION_KIND[act.name]


def action_for(c: ConcreteOptic) -> Action:
    """The action whose optics ``c`` describes."""
    if isinstance(c, WriterLens):
        return WriterAction(c.monoid)
    if isinstance(c, StatefulLens):
        return StateAction(c.q)
    if isinstance(c, Linear):
        return ProductAction()
    names = {v: k for k, v in _ACTION_KIND.items()}
    if c.kind not in names:
        raise UnsupportedAction(f"{c.kind} optics have no enumerable action")
    return make_action(names[c.kind])


def concretize(act: Action, p: Representative, kind: str | None = None) -> ConcreteOptic:
    """Push a representative through the Yoneda reduction of its action."""
    S, Sp, A, Ap = p.sig.sizes
    sig, M, l, r = p.sig, p.M, p.l, p.r
    if act.name not in _ACTION_KIND:
        raise UnsupportedAction(f"no concretization for {act.name}")
    kind = kind or concrete_kind(act)
    if act.name == "lens" and kind in ("lens", "linear"):
        get = [c % A for c in l]
        put = [r[(l[s] // A) * Ap + a] for s in range(S) for a in range(Ap)]
        lens = Lens(sig, get, put)
        return lens_to_linear(lens) if kind == "linear" else lens
    if kind != concrete_kind(act):
        raise KindMismatch(f"{act.name} optics concretize to {concrete_kind(act)}, not {kind}")
    if act.name == "prism":
        m = M[0]
        review = [r[m + a] for a in range(Ap)]
        matching = [r[c] if c < m else Sp + (c - m) for c in l]
        return Prism(sig, matching, review)
    if act.name == "iso":
        return Iso(sig, l, r)
    if act.name == "affine":
        P, Q = M
        step = []
        for s in range(S):
            c = l[s]
            if c < P:
                step.append(r[c])
            else:
                q, a = divmod(c - P, A)
                h = exp_encode([r[P + q * Ap + x] for x in range(Ap)], Sp)
                step.append(Sp + h * A + a)
        return Affine(sig, step)
    if act.name == "achromatic":
        m = M[0]
        point = Sp ** Ap
        opt, get = [], []
        for s in range(S):
            i, a = divmod(l[s], A)
            get.append(a)
            opt.append(point if i == m else exp_encode([r[i * Ap + x] for x in range(Ap)], Sp))
        create = [r[m * Ap + x] for x in range(Ap)]
        return Achromatic(sig, opt, get, create)
    if act.name == "grate":
        m = M[0]
        cols = [exp_decode(c, A, m) for c in l]     # l(s)(j) = cols[s][j]
        grate = []
        for k in range(Ap ** (A ** S)):
            kv = exp_decode(k, Ap, A ** S)
            h = [kv[exp_encode([cols[s][j] for s in range(S)], A)] for j in range(m)]
            grate.append(r[exp_encode(h, Ap)])
        return Grate(sig, grate)
    if act.name == "writer":
        w = act.monad.w
        get, put = [], []
        for s in range(S):
            ma, v = divmod(l[s], w)
            get.append((ma % A) * w + v)
        for s in range(S):
            m = (l[s] // w) // A
            put.extend(r[m * Ap + a] for a in range(Ap))
        return WriterLens(sig, act.monad.mul, get, put)
    if act.name == "state":
        T: StateMonad = act.monad
        q = T.q
        mget, mput = [], []
        for s in range(S):
            steps = T.decode(l[s], M[0] * A)
            mget.append(T.encode([(c % A, q1) for c, q1 in steps], A))
            for q0 in range(q):
                m = steps[q0][0] // A
                mput.extend(r[m * Ap + a] for a in range(Ap))
        return StatefulLens(sig, q, mget, mput)
    raise UnsupportedAction(f"no concretization for {act.name}")


def abstractify(act: Action, c: ConcreteOptic) -> Representative:
    """The canonical representative of a concrete optic."""
    S, Sp, A, Ap = c.sig.sizes
    sig = c.sig
    if isinstance(c, Linear):
        if act.name != "lens":
            raise KindMismatch("linear lenses are optics for the product action")
        # <unzip | eval> with residual S'^A'
        H = Sp ** Ap
        r = [exp_decode(h, Sp, Ap)[a] for h in range(H) for a in range(Ap)]
        return Representative(sig, (H,), c.unzip, tuple(r))
    if act.name not in _ACTION_KIND or c.kind != concrete_kind(act):
        raise KindMismatch(f"{c.kind} optic cannot be read in the {act.name} action")
    if isinstance(c, Lens):
        return Representative(sig, (S,), tuple(s * A + c.get[s] for s in range(S)), c.put)
    if isinstance(c, Prism):
        return Representative(sig, (Sp,), c.matching, tuple(range(Sp)) + c.review)
    if isinstance(c, Iso):
        return Representative(sig, act.unit, c.to, c.frm)
    if isinstance(c, Affine):
        H = Sp ** Ap
        r = list(range(Sp)) + [exp_decode(h, Sp, Ap)[a] for h in range(H) for a in range(Ap)]
        return Representative(sig, (Sp, H), c.step, tuple(r))
    if isinstance(c, Achromatic):
        H = Sp ** Ap
        l = tuple(c.opt[s] * A + c.get[s] for s in range(S))
        r = [exp_decode(h, Sp, Ap)[a] for h in range(H) for a in range(Ap)] + list(c.create)
        return Representative(sig, (H,), l, tuple(r))
    if isinstance(c, Grate):
        G = A ** S
        gs = [exp_decode(g, A, S) for g in range(G)]
        l = tuple(exp_encode([gs[g][s] for g in range(G)], A) for s in range(S))
        return Representative(sig, (G,), l, c.grate)
    if isinstance(c, WriterLens):
        w = act.monad.w
        l = tuple((s * A + c.get[s] // w) * w + c.get[s] % w for s in range(S))
        return Representative(sig, (S,), l, c.put)
    if isinstance(c, StatefulLens):
        T: StateMonad = act.monad
        if T.q != c.q:
            raise StateMismatch(f"action state size {T.q} differs from {c.q}")
        q = c.q
        l = []
        for s in range(S):
            steps = T.decode(c.mget[s], A)
            l.append(T.encode([((s * q + q0) * A + a, q1) for q0, (a, q1) in enumerate(steps)],
                              S * q * A))
        return Representative(sig, (S * q,), tuple(l), c.mput)
    raise KindMismatch(f"cannot abstractify {c.kind}")


# --------------------------------------------------- linear lenses / helpers

def lens_to_linear(c: Lens) -> Linear:
    S, Sp, A, Ap = c.sig.sizes
    unzip = [exp_encode([c.put[s * Ap + a] for a in range(Ap)], Sp) * A + c.get[s] for s in range(S)]
    return Linear(c.sig, unzip)


def linear_to_lens(c: Linear) -> Lens:
    S, Sp, A, Ap = c.sig.sizes
    get, put = [], []
    for s in range(S):
        h, a = c.split(s)
        get.append(a)
        put.extend(h)
    return Lens(c.sig, get, put)


def coordinate_traversal(n: int, A: int) -> Traversal:
    """The traversal of every coordinate of ``A^n`` (codes are product codes)."""
    S = A ** n
    branches = []
    for s in range(S):
        focus = tuple(reversed(exp_decode(s, A, n)))
        branches.append(FunList(n, focus, tuple(range(S))))
    return Traversal(OpticSignature(S, S, A, A), tuple(branches), cap=max(n, default_caps().funlist))


def concrete_count(kind: str, sig) -> int:
    """Number of concrete optics of ``kind`` with signature ``sig``."""
    S, Sp, A, Ap = _sig(sig).sizes
    counts = {
        "lens": A ** S * Sp ** (S * Ap),
        "prism": (Sp + A) ** S * Sp ** Ap,
        "iso": A ** S * Sp ** Ap,
        "affine": (Sp + Sp ** Ap * A) ** S,
        "linear": (Sp ** Ap * A) ** S,
        "achromatic": ((Sp ** Ap + 1) * A) ** S * Sp ** Ap,
        "grate": Sp ** (Ap ** (A ** S)),
    }
    if kind not in counts:
        raise KindMismatch(f"no closed count for {kind}")
    return counts[kind]


@dataclass(frozen=True)
class ComplementSplit:
    """``S ~ C x A`` for a lawful lens, with ``C`` the fibre of ``get`` over a point."""

    lens: Lens
    point: int
    fibre: tuple[int, ...]
    to: tuple[int, ...]      # s -> c * |A| + a
    frm: tuple[int, ...]     # c * |A| + a -> s

    @property
    def inverse(self) -> bool:
        n = len(self.to)
        return (len(self.frm) == n and all(self.frm[self.to[s]] == s for s in range(n))
                and all(self.to[self.frm[x]] == x for x in range(len(self.frm))))

    def representative(self) -> Representative:
        """``<to | frm>`` with residual ``C``."""
        return Representative(self.lens.sig, (len(self.fibre),), self.to, self.frm)


def constant_complement(c: Lens, point: int = 0) -> ComplementSplit:
    """Split ``S`` along the pullback of ``get`` over ``point : 1 -> A``.

    ``to(s) = (put(s, point), get(s))`` and ``frm(c, a) = put(c, a)``; both
    are total maps for any lens and mutually inverse when the lens is lawful.
    """
    S, Sp, A, Ap = c.sig.sizes
    if not c.sig.unprimed:
        raise SignatureMismatch(f"constant complements need S = S' and A = A', got {c.sig.sizes}")
    if not 0 <= point < A:
        raise DomainMismatch(f"point {point} is not an element of A")
    fibre = tuple(s for s in range(S) if c.get[s] == point)
    where = {s: i for i, s in enumerate(fibre)}
    to = []
    for s in range(S):
        base = c.update(s, point)
        if base not in where:
            raise DomainMismatch("put(s, point) leaves the fibre; the lens breaks PutGet")
        to.append(where[base] * A + c.get[s])
    frm = tuple(c.update(x, a) for x in fibre for a in range(A))
    return ComplementSplit(c, point, fibre, tuple(to), frm)


# ------------------------------------------------------- the kind lattice

_ABOVE = {
    "iso": ("iso", "lens", "prism", "affine", "traversal", "setter", "grate"),
    "lens": ("lens", "affine", "traversal", "setter"),
    "prism": ("prism", "affine", "traversal", "setter"),
    "affine": ("affine", "traversal", "setter"),
    "traversal": ("traversal", "setter"),
    "setter": ("setter",),
    "grate": ("grate",),
    "achromatic": ("achromatic",),
    "linear": ("linear",),
    "writer": ("writer",),
    "stateful": ("stateful",),
}


def is_above(target: str, source: str) -> bool:
    return target in _ABOVE.get(source, ())


def join_kind(a: str, b: str) -> str:
    common = [k for k in _ABOVE[a] if k in _ABOVE[b]]
    least = [k for k in common if all(is_above(o, k) for o in common)]
    if not least:
        raise NoCommonKind(f"{a} and {b} have no common kind")
    return least[0]


def _one_step(c: ConcreteOptic, target: str) -> ConcreteOptic:
    S, Sp, A, Ap = c.sig.sizes
    sig = c.sig
    if isinstance(c, Iso) and target == "lens":
        return Lens(sig, c.to, [c.frm[a] for s in range(S) for a in range(Ap)])
    if isinstance(c, Iso) and target == "prism":
        return Prism(sig, [Sp + a for a in c.to], c.frm)
    if isinstance(c, Iso) and target == "grate":
        # grate(k) = from(k(to))
        code_to = exp_encode(c.to, A)
        return Grate(sig, [c.frm[exp_decode(k, Ap, A ** S)[code_to]] for k in range(Ap ** (A ** S))])
    if isinstance(c, Lens) and target == "affine":
        step = [Sp + exp_encode(c.put[s * Ap:(s + 1) * Ap], Sp) * A + c.get[s] for s in range(S)]
        return Affine(sig, step)
    if isinstance(c, Prism) and target == "affine":
        h = exp_encode(c.review, Sp)
        return Affine(sig, [m if m < Sp else Sp + h * A + (m - Sp) for m in c.matching])
    if isinstance(c, Affine) and target == "traversal":
        branches = []
        for s in range(S):
            case = c.case(s)
            if case[0] == 0:
                branches.append(FunList(0, (), (case[1],)))
            else:
                branches.append(FunList(1, (case[2],), tuple(case[1])))
        return Traversal(sig, tuple(branches))
    if isinstance(c, Traversal) and target == "setter":
        over = []
        for f in range(Ap ** A):
            fv = exp_decode(f, Ap, A)
            out = [b.rebuild([fv[a] for a in b.focus], Ap) for b in c.branches]
            over.append(exp_encode(out, Sp))
        return Setter(sig, over)
    raise NotAbove(f"no direct conversion {c.kind} -> {target}")


_PATHS = {
    ("iso", "affine"): ("lens",), ("iso", "traversal"): ("lens", "affine"),
    ("iso", "setter"): ("lens", "affine", "traversal"),
    ("lens", "traversal"): ("affine",), ("lens", "setter"): ("affine", "traversal"),
    ("prism", "traversal"): ("affine",), ("prism", "setter"): ("affine", "traversal"),
    ("affine", "setter"): ("traversal",),
}


def convert(c: ConcreteOptic, target: str) -> ConcreteOptic:
    """Embed ``c`` into a kind above it in the lattice."""
    if target == c.kind:
        return c
    if not is_above(target, c.kind):
        raise NotAbove(f"{target} is not above {c.kind}")
    for step in _PATHS.get((c.kind, target), ()) + (target,):
        c = _one_step(c, step)
    return c


# ----------------------------------------------------------- composition

def _chain(outer: ConcreteOptic, inner: ConcreteOptic) -> None:
    so, si = outer.sig, inner.sig
    if (si.A, si.Ap) != (so.S, so.Sp):
        raise SignatureMismatch(f"cannot compose {so.sizes} after {si.sizes}")


def compose_concrete(outer: ConcreteOptic, inner: ConcreteOptic) -> ConcreteOptic:
    """``outer . inner`` for ``inner : (T, T') -> (S, S')``, ``outer : (S, S') -> (A, A')``.

    Both sides are converted to the join of their kinds first.
    """
    _chain(outer, inner)
    kind = join_kind(outer.kind, inner.kind)
    o, i = convert(outer, kind), convert(inner, kind)
    T, Tp = i.sig.S, i.sig.Sp
    S, Sp = o.sig.S, o.sig.Sp
    A, Ap = o.sig.A, o.sig.Ap
    sig = OpticSignature(T, Tp, A, Ap)
    if kind == "iso":
        return Iso(sig, [o.to[s] for s in i.to], [i.frm[s] for s in o.frm])
    if kind == "lens":
        get = [o.get[s] for s in i.get]
        put = [i.put[t * Sp + o.put[i.get[t] * Ap + a]] for t in range(T) for a in range(Ap)]
        return Lens(sig, get, put)
    if kind == "linear":
        return lens_to_linear(compose_concrete(linear_to_lens(o), linear_to_lens(i)))
    if kind == "prism":
        matching = []
        for t in range(T):
            tag, x = i.match(t)
            if tag == 0:
                matching.append(x)
            else:
                tag2, y = o.match(x)
                matching.append(i.review[y] if tag2 == 0 else Tp + y)
        return Prism(sig, matching, [i.review[s] for s in o.review])
    if kind == "affine":
        step = []
        for t in range(T):
            case = i.case(t)
            if case[0] == 0:
                step.append(case[1])
                continue
            h1, s = case[1], case[2]
            case2 = o.case(s)
            if case2[0] == 0:
                step.append(h1[case2[1]])
            else:
                h2, a = case2[1], case2[2]
                h = exp_encode([h1[h2[x]] for x in range(Ap)], Tp)
                step.append(Tp + h * A + a)
        return Affine(sig, step)
    if kind == "traversal":
        branches = []
        cap = max(o.cap, i.cap)
        for b in i.branches:
            subs = [o.branches[s] for s in b.focus]
            n = sum(x.n for x in subs)
            if n > cap:
                raise Overflow(f"composite FunList length {n} exceeds cap {cap}")
            focus = tuple(a for x in subs for a in x.focus)
            k = []
            for bs in itertools.product(range(Ap), repeat=n):
                pos, inner_vals = 0, []
                for x in subs:
                    inner_vals.append(x.rebuild(bs[pos:pos + x.n], Ap))
                    pos += x.n
                k.append(b.rebuild(inner_vals, Sp))
            branches.append(FunList(n, focus, tuple(k)))
        return Traversal(sig, tuple(branches), cap=cap)
    if kind == "setter":
        return Setter(sig, [i.over[o.over[f]] for f in range(Ap ** A)])
    if kind == "grate":
        HT, HS = S ** T, A ** S   # h : T -> S, g : S -> A
        hs = [exp_decode(h, S, T) for h in range(HT)]
        gs = [exp_decode(g, A, S) for g in range(HS)]
        out = []
        for k in range(Ap ** (A ** T)):
            kv = exp_decode(k, Ap, A ** T)
            outer_arg = []
            for h in range(HT):
                kk = [kv[exp_encode([gs[g][hs[h][t]] for t in range(T)], A)] for g in range(HS)]
                outer_arg.append(o.grate[exp_encode(kk, Ap)])
            out.append(i.grate[exp_encode(outer_arg, Sp)])
        return Grate(sig, out)
    if kind == "achromatic":
        point_i, point_o, point = Tp ** Sp, Sp ** Ap, Tp ** Ap
        opt = []
        for t in range(T):
            s = i.get[t]
            if i.opt[t] == point_i and o.opt[s] == point_o:
                opt.append(point)
                continue
            r1 = i.create if i.opt[t] == point_i else exp_decode(i.opt[t], Tp, Sp)
            r2 = o.create if o.opt[s] == point_o else exp_decode(o.opt[s], Sp, Ap)
            opt.append(exp_encode([r1[r2[a]] for a in range(Ap)], Tp))
        get = [o.get[s] for s in i.get]
        create = [i.create[s] for s in o.create]
        return Achromatic(sig, opt, get, create)
    if kind == "writer":
        if o.monoid != i.monoid:
            raise KindMismatch("writer lenses over different monoids")
        W = WriterMonad(o.monoid)
        w, mul = W.w, W.mul
        get = W.kleisli(i.get, o.get, S, A)
        put = []
        for t in range(T):
            s = i.get[t] // w
            for a in range(Ap):
                s2, w3 = divmod(o.put[s * Ap + a], w)
                t2, w4 = divmod(i.put[t * Sp + s2], w)
                put.append(t2 * w + mul[w3][w4])
        return WriterLens(sig, o.monoid, get, put)
    if kind == "stateful":
        return compose_stateful(o, i, plumbing="coend")
    raise NoCommonKind(f"composition of {kind} optics is not available")


def compose_stateful(outer: StatefulLens, inner: StatefulLens, *,
                     plumbing: str = "listing") -> StatefulLens:
    """Composite of ``inner : T -> S`` and ``outer : S -> A``.

    ``mget`` is Kleisli composition in both modes.  With ``plumbing="listing"``
    ``mput t q a`` saves the entry state, runs the inner ``mget`` to find ``s``
    and the state ``q'`` it leaves, restores the entry state, puts ``a`` into
    ``s`` with the outer ``mput`` at ``q'``, then puts the result into ``t``
    with the inner ``mput`` at ``q``.  With ``plumbing="coend"`` the inner
    ``mget`` is run from ``q`` instead of the entry state, which is what
    composing the representatives and reading the result back gives.
    """
    if plumbing not in ("listing", "coend"):
        raise ValueError(f"unknown plumbing {plumbing!r}")
    if outer.q != inner.q:
        raise StateMismatch(f"state sizes {inner.q} and {outer.q} differ")
    _chain(outer, inner)
    Q = outer.q
    M = StateMonad(Q)
    T, Tp = inner.sig.S, inner.sig.Sp
    S, Sp, A, Ap = outer.sig.sizes
    mget = M.kleisli(inner.mget, outer.mget, S, A)
    mput = []
    for t in range(T):
        for q in range(Q):
            for a in range(Ap):
                steps = []
                for start in range(Q):
                    s, q_mid = inner.run_get(t, start if plumbing == "listing" else q)
                    s2, q1 = outer.run_put(s, q_mid, a, start)
                    steps.append(inner.run_put(t, q, s2, q1))
                mput.append(M.encode(steps, Tp))
    return StatefulLens(OpticSignature(T, Tp, A, Ap), Q, mget, mput)
