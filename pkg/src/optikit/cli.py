"""Command-line interface.

Exit codes: 0 success, 1 a checked property failed, 2 usage error,
3 a size cap or audit stopped the computation.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from typing import Sequence, TextIO

from .caps import parse_caps
from .errors import AuditFailure, OptikitError, OutOfTable, Overflow

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3
ACTIONS = ("lens", "prism", "iso", "affine", "achromatic", "grate", "writer", "state")


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class CliConfig:
    command: str
    action: str
    sizes: tuple[int, int, int, int]
    bound: int | None
    format: str
    seed: int
    monoid_table: tuple[tuple[int, ...], ...] | None
    state_size: int | None

    def make_action(self):
        from .action import make_action
        return make_action(self.action, self.monoid_table, self.state_size)

    @property
    def sig(self):
        from .optic_core import OpticSignature
        return OpticSignature(*self.sizes)


def parse_sizes(text: str) -> tuple[int, int, int, int]:
    """``S,S',A,A'`` or the shorthand ``S,A`` for ``S = S'`` and ``A = A'``."""
    try:
        parts = [int(x) for x in text.split(",") if x.strip() != ""]
    except ValueError:
        raise UsageError(f"sizes must be comma-separated integers, got {text!r}")
    if len(parts) == 2:
        parts = [parts[0], parts[0], parts[1], parts[1]]
    if len(parts) != 4 or any(x < 0 for x in parts):
        raise UsageError(f"sizes take 2 or 4 non-negative integers, got {text!r}")
    return tuple(parts)


def _monoid(text: str | None):
    if text is None:
        return None
    try:
        rows = json.loads(text)
        return tuple(tuple(int(x) for x in row) for row in rows)
    except (ValueError, TypeError):
        raise UsageError("--monoid-table takes a JSON list of rows, e.g. [[0,1],[1,0]]")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--action", default="lens", choices=ACTIONS)
    common.add_argument("--sizes", default="2,2,2,2", help="S,S',A,A' or S,A")
    common.add_argument("--bound", type=int, default=None, help="residual bound of the quotient")
    common.add_argument("--format", default="table", choices=("table", "json"))
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--monoid-table", default=None, help="writer monoid as a JSON table")
    common.add_argument("--state-size", type=int, default=None, help="state set size for 'state'")
    common.add_argument("--caps", default=None, help="cap overrides, e.g. reps=100000,funlist=3")

    parser = argparse.ArgumentParser(prog="optikit", description="Finite optics with a decidable quotient.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("count", parents=[common], help="number of optic classes")
    en = sub.add_parser("enumerate", parents=[common], help="canonical representatives")
    en.add_argument("--concrete", action="store_true", help="print concrete forms instead")
    sub.add_parser("lawful", parents=[common], help="lawfulness of every class")
    ck = sub.add_parser("check", parents=[common], help="run a named theorem suite")
    ck.add_argument("suite", help="suite id, or 'all'")
    rt = sub.add_parser("roundtrip", parents=[common], help="optic -> profunctor optic -> optic")
    rt.add_argument("--validate", action="store_true", help="also validate the Tambara module")
    cp = sub.add_parser("compose", parents=[common], help="compose two concrete optics (JSON)")
    cp.add_argument("outer", help="file with the outer optic, or '-' for a JSON pair on stdin")
    cp.add_argument("inner", nargs="?", default=None, help="file with the inner optic")
    return parser


def _config(ns) -> CliConfig:
    if ns.bound is not None and ns.bound < 1:
        raise UsageError("--bound must be at least 1")
    if ns.state_size is not None and ns.state_size < 1:
        raise UsageError("--state-size must be at least 1")
    return CliConfig(ns.command, ns.action, parse_sizes(ns.sizes), ns.bound, ns.format, ns.seed,
                     _monoid(ns.monoid_table), ns.state_size)


def _emit(out: TextIO, data) -> None:
    out.write(json.dumps(data, sort_keys=False) + "\n")


# -------------------------------------------------------------- commands

def cmd_count(cfg: CliConfig, ns, out: TextIO) -> int:
    from .optic_core import get_table
    table = get_table(cfg.make_action(), cfg.sig, cfg.bound)
    if cfg.format == "json":
        _emit(out, {"action": cfg.action, "sig": list(cfg.sizes), "bound": table.bound,
                    "count": table.count})
    else:
        out.write(f"{table.count}\n")
    return EXIT_OK


def cmd_enumerate(cfg: CliConfig, ns, out: TextIO) -> int:
    from .concrete import concretize
    from .optic_core import get_table
    act = cfg.make_action()
    table = get_table(act, cfg.sig, cfg.bound)
    for cid in range(table.count):
        rep = table.canon(cid)
        body = concretize(act, rep).to_json() if ns.concrete else \
            {k: v for k, v in rep.to_json().items() if k != "sig"}
        if cfg.format == "json":
            _emit(out, {"id": cid, "concrete" if ns.concrete else "canon": body})
        else:
            out.write(f"{cid}\t" + " ".join(f"{k}={json.dumps(v, separators=(',', ':'))}"
                                            for k, v in body.items() if k != "sig") + "\n")
    return EXIT_OK


def cmd_lawful(cfg: CliConfig, ns, out: TextIO) -> int:
    from .concrete import concretize
    from .errors import KindMismatch
    from .laws import lawful_verdict, laws_of
    from .optic_core import get_table
    act = cfg.make_action()
    if not cfg.sig.unprimed:
        raise UsageError("lawfulness needs S = S' and A = A'")
    table = get_table(act, cfg.sig, cfg.bound)
    status = EXIT_OK
    for cid, p in enumerate(table.canons()):
        verdict = lawful_verdict(act, p, method="auto")
        try:
            report = laws_of(concretize(act, p))
        except KindMismatch:
            report = None
        if verdict.lawful is None:
            status = EXIT_CAP
        if report is not None and verdict.lawful is not None and report.overall != verdict.lawful:
            status = max(status, EXIT_FAIL)
        lawful = "unknown" if verdict.lawful is None else str(verdict.lawful).lower()
        if cfg.format == "json":
            _emit(out, {"id": cid, "lawful": verdict.lawful, "verdict": verdict.to_json(),
                        "report": report.to_json() if report else None})
        else:
            laws = ",".join(f"{k}={str(v).lower()}" for k, v in report.laws.items()) if report else "-"
            out.write(f"{cid}\t{lawful}\t{laws}\n")
    return status


def cmd_check(cfg: CliConfig, ns, out: TextIO) -> int:
    from .suites import run_suite, suite_ids
    ids = suite_ids() if ns.suite == "all" else [ns.suite]
    if any(s not in suite_ids() for s in ids):
        raise UsageError(f"unknown suite {ns.suite!r}; known: {', '.join(suite_ids())}")
    explicit = "--sizes" in (ns.argv or [])
    status = EXIT_OK
    for sid in ids:
        res = run_suite(sid, sizes=_suite_sizes(ns.sizes) if explicit else None, seed=cfg.seed)
        if cfg.format == "json":
            _emit(out, res.to_json())
        else:
            out.write(res.line() + "\n")
        if not res.passed:
            status = EXIT_FAIL
    return status


def _suite_sizes(text: str) -> tuple[int, ...]:
    parse_sizes(text)
    return tuple(int(x) for x in text.split(","))


def cmd_roundtrip(cfg: CliConfig, ns, out: TextIO) -> int:
    from .optic_core import get_table
    from .profunctor import mutate_zeta, optic_to_profunctor, phi_exchange, profunctor_to_optic
    act = cfg.make_action()
    table = get_table(act, cfg.sig, cfg.bound)
    good = sum(profunctor_to_optic(optic_to_profunctor(act, p)) == cid
               for cid, p in enumerate(table.canons()))
    result = {"action": cfg.action, "sig": list(cfg.sizes), "classes": table.count, "roundtrips": good}
    ok = good == table.count
    if ns.validate:
        module = phi_exchange(act, cfg.sig.A, cfg.sig.Ap)
        report, mutated = module.validate(), mutate_zeta(module).validate()
        result["validation"] = report.to_json()
        result["mutation"] = mutated.to_json()
        ok = ok and report.ok and not mutated.ok
    if cfg.format == "json":
        _emit(out, result)
    else:
        out.write(f"roundtrip {good}/{table.count}\n")
        if ns.validate:
            for key in ("validation", "mutation"):
                rep = result[key]
                cells = " ".join(f"{k}={v['pass']}/{v['fail']}" for k, v in rep["squares"].items())
                out.write(f"{key} ok={str(rep['ok']).lower()} {cells}\n")
    return EXIT_OK if ok else EXIT_FAIL


def _read_json(path: str, stdin: TextIO):
    text = stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    try:
        return json.loads(text)
    except ValueError as exc:
        raise UsageError(f"{path}: not valid JSON ({exc})")


def cmd_compose(cfg: CliConfig, ns, out: TextIO, stdin: TextIO) -> int:
    from .concrete import compose_concrete, from_json
    if ns.inner is None:
        pair = _read_json(ns.outer, stdin)
        if not (isinstance(pair, list) and len(pair) == 2):
            raise UsageError("with one argument, input must be a JSON list [outer, inner]")
        outer, inner = pair
    else:
        outer, inner = _read_json(ns.outer, stdin), _read_json(ns.inner, stdin)
    try:
        comp = compose_concrete(from_json(outer), from_json(inner))
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"malformed optic: {exc}")
    data = comp.to_json()
    if cfg.format == "json":
        _emit(out, data)
    else:
        out.write(f"kind={data['kind']} sig={','.join(map(str, data['sig']))}\n")
        out.write(json.dumps(data) + "\n")
    return EXIT_OK


COMMANDS = {"count": cmd_count, "enumerate": cmd_enumerate, "lawful": cmd_lawful,
            "check": cmd_check, "roundtrip": cmd_roundtrip}


def run(argv: Sequence[str] | None = None, out: TextIO | None = None,
        err: TextIO | None = None, stdin: TextIO | None = None) -> int:
    out, err, stdin = out or sys.stdout, err or sys.stderr, stdin or sys.stdin
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    ns.argv = argv
    saved = os.environ.get("OPTIKIT_CAPS")
    try:
        if ns.caps is not None:
            merged = {**parse_caps(saved or ""), **parse_caps(ns.caps)}
            os.environ["OPTIKIT_CAPS"] = json.dumps(merged)
        cfg = _config(ns)
        if ns.command == "compose":
            return cmd_compose(cfg, ns, out, stdin)
        return COMMANDS[ns.command](cfg, ns, out)
    except UsageError as exc:
        err.write(f"optikit: {exc}\n")
        return EXIT_USAGE
    except (Overflow, AuditFailure, OutOfTable) as exc:
        err.write(f"optikit: {type(exc).__name__}: {exc}\n")
        return EXIT_CAP
    except (OptikitError, ValueError, OSError) as exc:
        err.write(f"optikit: {type(exc).__name__}: {exc}\n")
        return EXIT_USAGE
    finally:
        if ns.caps is not None:
            if saved is None:
                os.environ.pop("OPTIKIT_CAPS", None)
            else:
                os.environ["OPTIKIT_CAPS"] = saved


def main() -> None:
    sys.exit(run())
