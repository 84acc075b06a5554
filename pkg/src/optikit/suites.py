"""Named theorem suites, one per acceptance property, runnable from the CLI.

Every suite returns a ``SuiteResult`` whose ``details`` hold the raw counts;
``passed`` is computed from those counts only.  Randomised suites draw from
``random.Random(seed)``.
"""
from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .action import StateMonad, make_action
from .concrete import (Lens, Linear, StatefulLens, abstractify, compose_stateful, concrete_count,
                       concrete_kind, concretize, constant_complement, convert, coordinate_traversal,
                       linear_to_lens)
from .finset import FiniteFunction
from .laws import (is_lawful, lawful_closure_checks, lawfulness_equivalence, laws_of,
                   onthenose_search, prism_third_law_check)
from .optic_core import (OpticSignature, Representative, build_quotient, classify, compose_optics,
                         decompose_check, decompose_composite, default_bound, get_table,
                         identity_optic, iota, same_class, teleological_checks)
from .profunctor import (comonoid_report, mutate_zeta, optic_to_profunctor, phi_exchange,
                         profunctor_to_optic)

__all__ = ["SuiteResult", "SUITES", "CRITERIA", "run_suite", "suite_ids",
           "lawful_stateful_examples", "lawful_lenses"]

ORACLE_ACTIONS = ("lens", "prism", "iso", "affine")


@dataclass
class SuiteResult:
    id: str
    criterion: int | None
    passed: bool
    summary: str
    details: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        crit = f"#{self.criterion} " if self.criterion else ""
        return f"[{tag}] {crit}{self.id}: {self.summary}"

    def to_json(self, timing: bool = False) -> dict:
        out = {"id": self.id, "criterion": self.criterion, "passed": self.passed,
               "summary": self.summary, "details": self.details}
        if timing:
            out["seconds"] = round(self.seconds, 3)
        return out


def _pair(sizes: Sequence[int] | None, default: tuple[int, int]) -> tuple[int, int]:
    if not sizes:
        return default
    return int(sizes[0]), int(sizes[-1] if len(sizes) == 2 else sizes[2])


# --------------------------------------------------------------- 1 and 2

def _configs() -> list[OpticSignature]:
    sigs = [OpticSignature(2, 2, 2, 2)]
    sigs += [OpticSignature(*t) for t in itertools.product((1, 2), repeat=4) if t != (2, 2, 2, 2)]
    return sigs


def quotient_concrete(sizes=None, seed=0) -> tuple[bool, str, dict]:
    rows, bad = [], []
    for name in ORACLE_ACTIONS:
        act = make_action(name)
        kind = concrete_kind(act)
        for sig in _configs():
            table = get_table(act, sig)
            expected = concrete_count(kind, sig)
            images = [concretize(act, c) for c in table.canons()]
            constant = all(concretize(act, rep) == images[table.class_of(rep)]
                           for rep in (table.rep_at(i) for i in range(table.n_reps)))
            injective = len(set(images)) == len(images)
            ok = table.count == expected and constant and injective
            row = {"action": name, "sig": list(sig.sizes), "classes": table.count,
                   "concrete": expected, "constant": constant, "injective": injective}
            rows.append(row)
            if not ok:
                bad.append(row)
    headline = {r["action"]: r["classes"] for r in rows if r["sig"] == [2, 2, 2, 2]}
    summary = (f"{len(rows) - len(bad)}/{len(rows)} configurations match; sizes 2: "
               + ", ".join(f"{k}={v}" for k, v in headline.items()))
    return not bad, summary, {"configurations": rows, "failures": bad}


def bound_stability(sizes=None, seed=0) -> tuple[bool, str, dict]:
    rows, bad = [], []
    for name in ORACLE_ACTIONS:
        act = make_action(name)
        for sig in _configs():
            B = default_bound(act, sig)
            a = get_table(act, sig, B).count
            b = build_quotient(act, sig, B + 1, audit=False).count
            rows.append({"action": name, "sig": list(sig.sizes), "bound": B, "count": a, "next": b})
            if a != b:
                bad.append(rows[-1])
    return not bad, f"{len(rows) - len(bad)}/{len(rows)} counts stable at B and B+1", \
        {"configurations": rows, "failures": bad}


# ------------------------------------------------------------------ 3

def _cls(act, p: Representative) -> tuple:
    return (p.sig, classify(act, p)[1])


def category_axioms(sizes=None, seed=0, samples: int = 200) -> tuple[bool, str, dict]:
    rng = random.Random(seed)
    details, failures = {}, []
    for name in ORACLE_ACTIONS:
        act = make_action(name)
        chain = [OpticSignature(1, 1, 1, 1), OpticSignature(1, 1, 2, 2), OpticSignature(2, 2, 2, 2)]
        tables = [get_table(act, s) for s in chain]
        unit_checks = assoc_checks = 0
        for t in tables:
            for p in t.canons():
                S, Sp, A, Ap = p.sig.sizes
                for q in (compose_optics(act, identity_optic(act, A, Ap), p),
                          compose_optics(act, p, identity_optic(act, S, Sp))):
                    unit_checks += 1
                    if _cls(act, q) != _cls(act, p):
                        failures.append({"action": name, "check": "unit", "optic": p.to_json()})
        # p : X0 -> X1, q : X1 -> X2, r : X2 -> X3 with objects of sizes 1, 1, 2, 2
        triples = list(itertools.product(*(t.canons() for t in tables)))
        big = get_table(act, OpticSignature(2, 2, 2, 2)).canons()
        triples += [tuple(rng.choice(big) for _ in range(3)) for _ in range(samples)]
        for p, q, r in triples:
            assoc_checks += 1
            left = compose_optics(act, compose_optics(act, r, q), p)
            right = compose_optics(act, r, compose_optics(act, q, p))
            if _cls(act, left) != _cls(act, right):
                failures.append({"action": name, "check": "assoc", "p": p.to_json()})
        details[name] = {"unit": unit_checks, "assoc": assoc_checks,
                         "exhaustive_chain": len(triples) - samples, "random": samples}
    total = sum(d["unit"] + d["assoc"] for d in details.values())
    return not failures, f"{total} identity/associativity checks, {len(failures)} failures", \
        {"actions": details, "seed": seed, "failures": failures[:10]}


# ------------------------------------------------------------------ 4-6

def lens_laws_equiv(sizes=None, seed=0) -> tuple[bool, str, dict]:
    S, A = _pair(sizes, (2, 2))
    out, ok = {}, True
    for name in ("lens", "prism", "iso"):
        rep = lawfulness_equivalence(make_action(name), (S, A))
        out[name] = rep.to_json()
        ok &= rep.passed
    lawful = {k: v["details"]["lawful"] for k, v in out.items()}
    if (S, A) == (2, 2):
        ok &= lawful["lens"] == 2 and lawful["iso"] == 2
    summary = f"sizes ({S},{A}) lawful: " + ", ".join(f"{k}={v}" for k, v in lawful.items())
    return ok, summary, {"reports": out, "lawful": lawful}


def prism_third_law(sizes=None, seed=0) -> tuple[bool, str, dict]:
    n = max(sizes) if sizes else 3
    rep = prism_third_law_check(n)
    return rep.passed, (f"{len(rep.failures)} of {rep.details['satisfying_first_two']} two-law prisms "
                        f"fail the third (sizes <= {n})"), rep.to_json()


def lawful_closure(sizes=None, seed=0) -> tuple[bool, str, dict]:
    S, A = _pair(sizes, (2, 2))
    out, ok, checked = {}, True, 0
    for name in ORACLE_ACTIONS:
        rep = lawful_closure_checks(make_action(name), (S, A))
        out[name] = rep.to_json()
        ok &= rep.passed
        checked += rep.checked
    return ok, f"{checked} closure checks over lawful pairs at ({S},{A})", out


# ------------------------------------------------------------------ 7

def teleological(sizes=None, seed=0) -> tuple[bool, str, dict]:
    act = make_action("lens")
    squares = teleological_checks(act, 2)
    table = get_table(act, OpticSignature(2, 2, 2, 2))
    decomposed = sum(decompose_check(act, p) for p in table.canons())
    corrupt_differs = sum(not same_class(act, p, decompose_composite(act, p, corrupt=True))
                          for p in table.canons())
    fails = sum(f for _, f in squares.values()) + (table.count - decomposed)
    summary = (f"counit squares {sum(p for p, _ in squares.values())} pass / "
               f"{sum(f for _, f in squares.values())} fail; decomposition {decomposed}/{table.count}")
    return fails == 0 and corrupt_differs > 0, summary, \
        {"squares": squares, "decomposed": decomposed, "classes": table.count,
         "corrupted_composites_detected": corrupt_differs}


# ------------------------------------------------------------------ 8-9

def profunctor_roundtrip(sizes=None, seed=0) -> tuple[bool, str, dict]:
    act = make_action("lens")
    table = get_table(act, OpticSignature(2, 2, 2, 2))
    trips = sum(profunctor_to_optic(optic_to_profunctor(act, p)) == cid
                for cid, p in enumerate(table.canons()))
    module = phi_exchange(act, 2, 2)
    good = module.validate()
    bad = mutate_zeta(module).validate()
    ok = trips == table.count and good.ok and not bad.ok
    summary = (f"round-trip {trips}/{table.count}; Phi(E) coherence {'ok' if good.ok else 'FAILS'}; "
               f"mutated zeta rejected by {bad.failed()}")
    return ok, summary, {"roundtrips": trips, "classes": table.count,
                         "validation": good.to_json(), "mutation": bad.to_json()}


def comonoid_lawful(sizes=None, seed=0) -> tuple[bool, str, dict]:
    S, A = _pair(sizes, (2, 2))
    out, ok = {}, True
    for name in ("lens", "prism", "iso"):
        act = make_action(name)
        table = get_table(act, OpticSignature(S, S, A, A))
        agree = homs = divergences = checked = skipped = 0
        for p in table.canons():
            rep = comonoid_report(act, p)
            law = is_lawful(act, p)
            agree += rep.homomorphism == law
            homs += rep.homomorphism
            divergences += rep.divergence
            checked += rep.audit_checked
            skipped += rep.audit_skipped
        out[name] = {"classes": table.count, "agree": agree, "homomorphisms": homs,
                     "audit_cells": checked, "audit_skipped": skipped, "divergences": divergences}
        ok &= agree == table.count
    summary = ", ".join(f"{k} {v['agree']}/{v['classes']} agree ({v['homomorphisms']} true)"
                        for k, v in out.items())
    return ok, summary, out


# ------------------------------------------------------------------ 10

def coalgebra_laws(sizes=None, seed=0) -> tuple[bool, str, dict]:
    trav = []
    for n in range(1, 4):
        for A in range(0, 3):
            rep = laws_of(coordinate_traversal(n, A))
            trav.append({"n": n, "A": A, "laws": rep.laws})
    sig = OpticSignature(2, 2, 2, 2)
    equiv_fail, lawful_linear, lawful_traversal = 0, 0, 0
    for unzip in itertools.product(range(2 ** 2 * 2), repeat=2):
        lin = Linear(sig, unzip)
        lens = linear_to_lens(lin)
        lin_ok = laws_of(lin).overall
        lens_ok = laws_of(lens).overall
        equiv_fail += lin_ok != lens_ok
        if lin_ok:
            lawful_linear += 1
            lawful_traversal += laws_of(convert(lens, "traversal")).overall
    ok = (all(all(t["laws"].values()) for t in trav) and equiv_fail == 0
          and lawful_traversal == lawful_linear)
    summary = (f"{len(trav)} coordinate traversals lawful; {lawful_linear} lawful linear lenses, "
               f"{lawful_traversal} lawful as traversals; Rezip/ZipZip vs lens laws mismatches {equiv_fail}")
    return ok, summary, {"traversals": trav, "lawful_linear": lawful_linear,
                         "lawful_as_traversal": lawful_traversal, "equivalence_failures": equiv_fail}


# ------------------------------------------------------------------ 11

def _stateful(get, put, get_state, put_state) -> StatefulLens:
    T = StateMonad(2)
    mget = [T.encode([(get[s], get_state(s, q0)) for q0 in range(2)], 2) for s in range(2)]
    mput = [T.encode([(put[s][a], put_state(s, q, a, q0)) for q0 in range(2)], 2)
            for s in range(2) for q in range(2) for a in range(2)]
    return StatefulLens(OpticSignature(2, 2, 2, 2), 2, mget, mput)


def lawful_stateful_examples() -> dict[str, StatefulLens]:
    """Hand-built lawful stateful lenses on ``S = A = Q = 2``."""
    same, swap = [0, 1], [1, 0]
    put_same, put_swap = [[0, 1], [0, 1]], [[1, 0], [1, 0]]
    return {
        "pure": _stateful(same, put_same, lambda s, q: q, lambda s, q, a, q0: q0),
        "pure-swap": _stateful(swap, put_swap, lambda s, q: q, lambda s, q, a, q0: q0),
        "toggle": _stateful(same, put_same, lambda s, q: 1 - q, lambda s, q, a, q0: 1 - q0),
        "toggle-swap": _stateful(swap, put_swap, lambda s, q: 1 - q, lambda s, q, a, q0: 1 - q0),
        "xor": _stateful(same, put_same, lambda s, q: q ^ s, lambda s, q, a, q0: q0 ^ a),
    }


def _kleisli_get(outer: StatefulLens, inner: StatefulLens, comp: StatefulLens) -> bool:
    for t, q0 in itertools.product(range(inner.sig.S), range(inner.q)):
        s, q1 = inner.run_get(t, q0)
        if comp.run_get(t, q0) != outer.run_get(s, q1):
            return False
    return True


def stateful_lenses(sizes=None, seed=0) -> tuple[bool, str, dict]:
    ex = lawful_stateful_examples()
    singles = {k: laws_of(v).laws for k, v in ex.items()}
    pairs, bad = 0, []
    for (no, o), (ni, i) in itertools.product(ex.items(), repeat=2):
        comp = compose_stateful(o, i)
        rep = laws_of(comp)
        pairs += 1
        if not (rep.overall and _kleisli_get(o, i, comp)):
            bad.append({"outer": no, "inner": ni, "laws": rep.laws})
    ok = all(all(v.values()) for v in singles.values()) and not bad
    return ok, f"{len(ex)} lawful stateful lenses; {pairs - len(bad)}/{pairs} listing composites lawful " \
               f"with Kleisli mget", {"lenses": singles, "composites": pairs, "failures": bad}


# ------------------------------------------------------------------ 12-13

def iota_nonfaithful(sizes=None, seed=0) -> tuple[bool, str, dict]:
    act = make_action("lens")
    f = FiniteFunction(0, 1, [])
    gs = [FiniteFunction(1, 2, [0]), FiniteFunction(1, 2, [1])]
    witness = None
    for g1, g2 in itertools.combinations(gs, 2):
        if g1.table != g2.table and same_class(act, iota(act, f, g1), iota(act, f, g2)):
            witness = {"f": f.to_json(), "g1": g1.to_json(), "g2": g2.to_json()}
            break
    return witness is not None, "witness found" if witness else "no witness", {"witness": witness}


def lawful_lenses(S: int, A: int) -> list[Lens]:
    """All lawful lenses ``S -> A`` (GetPut and PutGet pin ``put`` to fibres; PutPut filters)."""
    sig = OpticSignature(S, S, A, A)
    out = []
    for get in itertools.product(range(A), repeat=S):
        fibres = [[s for s in range(S) if get[s] == a] for a in range(A)]
        slots = []
        for s in range(S):
            for a in range(A):
                slots.append([s] if a == get[s] else fibres[a])
        if any(not c for c in slots):
            continue
        for put in itertools.product(*slots):
            lens = Lens(sig, get, put)
            if laws_of(lens).overall:
                out.append(lens)
    return out


def constant_complement_suite(sizes=None, seed=0) -> tuple[bool, str, dict]:
    act = make_action("lens")
    rows, ok = [], True
    for S, A in ((2, 2), (4, 2)):
        lenses = lawful_lenses(S, A)
        good = 0
        for lens in lenses:
            split = constant_complement(lens)
            rep = split.representative()
            same = split.inverse and concretize(act, rep) == lens
            if S <= 2:
                same &= same_class(act, rep, abstractify(act, lens))
            good += same
        rows.append({"sizes": [S, A], "lawful": len(lenses), "decomposed": good})
        ok &= good == len(lenses) and len(lenses) > 0
    summary = "; ".join(f"({r['sizes'][0]},{r['sizes'][1]}) {r['decomposed']}/{r['lawful']}" for r in rows)
    return ok, summary, {"rows": rows}


def onthenose(sizes=None, seed=0) -> tuple[bool, str, dict]:
    """Lawful lenses with an inflated residual slide to an on-the-nose representative."""
    act = make_action("lens")
    found = 0
    lenses = lawful_lenses(2, 2)
    for lens in lenses:
        p = abstractify(act, lens)
        res = onthenose_search(act, p)
        found += res.status == "found" and same_class(act, res.rep, p)
    return found == len(lenses), f"{found}/{len(lenses)} lawful lenses reach an on-the-nose form", \
        {"found": found, "lawful": len(lenses)}


# ------------------------------------------------------------- registry

Suite = Callable[..., tuple[bool, str, dict]]

SUITES: dict[str, tuple[int | None, Suite]] = {
    "quotient-concrete": (1, quotient_concrete),
    "bound-stability": (2, bound_stability),
    "category-axioms": (3, category_axioms),
    "lens-laws-equiv": (4, lens_laws_equiv),
    "prism-third-law": (5, prism_third_law),
    "lawful-closure": (6, lawful_closure),
    "teleological": (7, teleological),
    "profunctor-roundtrip": (8, profunctor_roundtrip),
    "comonoid-lawful": (9, comonoid_lawful),
    "coalgebra-laws": (10, coalgebra_laws),
    "stateful-lenses": (11, stateful_lenses),
    "iota-nonfaithful": (12, iota_nonfaithful),
    "constant-complement": (13, constant_complement_suite),
    "onthenose": (None, onthenose),
}

CRITERIA = {crit: sid for sid, (crit, _) in SUITES.items() if crit}


def suite_ids() -> list[str]:
    return list(SUITES)


def run_suite(sid: str, *, sizes: Sequence[int] | None = None, seed: int = 0) -> SuiteResult:
    if sid not in SUITES:
        raise KeyError(f"unknown suite {sid!r}; known: {', '.join(SUITES)}")
    crit, fn = SUITES[sid]
    start = time.perf_counter()
    passed, summary, details = fn(sizes, seed)
    return SuiteResult(sid, crit, bool(passed), summary, details, time.perf_counter() - start)
