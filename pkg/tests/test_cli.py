from __future__ import annotations

import io
import json
import subprocess
import sys

import pytest

from optikit.cli import EXIT_CAP, EXIT_FAIL, EXIT_OK, EXIT_USAGE, parse_sizes, run, UsageError


def call(*argv, stdin=""):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err, io.StringIO(stdin))
    return code, out.getvalue(), err.getvalue()


def test_count():
    code, out, _ = call("count", "--action", "lens", "--sizes", "2,2,2,2", "--bound", "3")
    assert code == EXIT_OK and out == "64\n"
    code, out, _ = call("count", "--action", "iso", "--sizes", "2,2", "--format", "json")
    assert code == EXIT_OK and json.loads(out)["count"] == 16


def test_lawful_counts_true():
    code, out, _ = call("lawful", "--action", "lens", "--sizes", "2,2")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert len(lines) == 64
    assert sum(line.split("\t")[1] == "true" for line in lines) == 2


def test_lawful_json():
    code, out, _ = call("lawful", "--action", "iso", "--sizes", "2,2", "--format", "json")
    rows = [json.loads(x) for x in out.splitlines()]
    assert code == EXIT_OK and len(rows) == 16
    assert sum(r["lawful"] for r in rows) == 2
    assert all(r["report"]["overall"] == r["lawful"] for r in rows)


def test_lawful_rejects_primed_sizes():
    code, _, err = call("lawful", "--sizes", "2,1,2,2")
    assert code == EXIT_USAGE and "S = S'" in err


def test_enumerate():
    code, out, _ = call("enumerate", "--action", "iso", "--sizes", "1,1,2,2", "--concrete",
                        "--format", "json")
    rows = [json.loads(x) for x in out.splitlines()]
    assert code == EXIT_OK and len(rows) == 2 ** 1 * 1 ** 2
    assert rows[0]["concrete"]["kind"] == "iso"
    code, out, _ = call("enumerate", "--action", "lens", "--sizes", "1,1,1,1")
    assert code == EXIT_OK and out.startswith("0\t")


def test_check_suites():
    code, out, _ = call("check", "prism-third-law", "--sizes", "3,3")
    assert code == EXIT_OK and out.startswith("[PASS]")
    code, out, _ = call("check", "iota-nonfaithful", "--format", "json")
    assert code == EXIT_OK and json.loads(out)["passed"] is True
    code, _, err = call("check", "no-such-suite")
    assert code == EXIT_USAGE and "unknown suite" in err


def test_roundtrip():
    code, out, _ = call("roundtrip", "--action", "lens", "--sizes", "2,2,2,2", "--validate")
    assert code == EXIT_OK
    assert out.splitlines()[0] == "roundtrip 64/64"
    assert "validation ok=true" in out and "mutation ok=false" in out


def test_compose_stdin_and_files(tmp_path):
    outer = {"kind": "lens", "sig": [2, 2, 2, 2], "get": [1, 0], "put": [1, 0, 1, 0]}
    inner = {"kind": "prism", "sig": [2, 2, 2, 2], "matching": [0, 3], "review": [1, 0]}
    code, out, _ = call("compose", "-", "--format", "json", stdin=json.dumps([outer, inner]))
    assert code == EXIT_OK and json.loads(out)["kind"] == "affine"
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    a.write_text(json.dumps(outer))
    b.write_text(json.dumps(inner))
    code, out2, _ = call("compose", str(a), str(b), "--format", "json")
    assert code == EXIT_OK and out2 == out
    code, _, _ = call("compose", "-", stdin="not json")
    assert code == EXIT_USAGE
    grate = {"kind": "grate", "sig": [1, 1, 1, 1], "grate": [0]}
    lens = {"kind": "lens", "sig": [1, 1, 1, 1], "get": [0], "put": [0]}
    code, _, err = call("compose", "-", stdin=json.dumps([lens, grate]))
    assert code == EXIT_USAGE and "NoCommonKind" in err


@pytest.mark.parametrize("argv", [["count", "--sizes", "2,x"], ["count", "--sizes", "1,2,3"],
                                  ["count", "--bound", "0"], ["count", "--action", "setter"],
                                  ["frobnicate"], ["count", "--monoid-table", "[[0,1]"],
                                  ["count", "--action", "writer", "--monoid-table", "[[0,1],[0,1]]"]])
def test_usage_errors(argv):
    assert call(*argv)[0] == EXIT_USAGE


def test_cap_overflow_exit_code():
    code, _, err = call("count", "--sizes", "4,4,4,4", "--caps", "reps=1000")
    assert code == EXIT_CAP and "Overflow" in err


def test_unknown_verdicts_exit_cap():
    code, out, _ = call("lawful", "--action", "state", "--sizes", "1,1")
    assert code in (EXIT_OK, EXIT_CAP)
    if code == EXIT_CAP:
        assert "unknown" in out


def test_exit_codes_distinct():
    assert len({EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP}) == 4


def test_parse_sizes():
    assert parse_sizes("2,3") == (2, 2, 3, 3)
    assert parse_sizes("1,2,3,4") == (1, 2, 3, 4)
    with pytest.raises(UsageError):
        parse_sizes("-1,2")


def test_deterministic_output():
    argv = ["enumerate", "--action", "prism", "--sizes", "2,2,2,2", "--format", "json"]
    assert call(*argv) == call(*argv)
    argv = ["check", "category-axioms", "--seed", "3", "--format", "json"]
    assert call(*argv)[1] == call(*argv)[1]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "optikit", "count", "--action", "iso",
                           "--sizes", "2,2"], capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0 and proc.stdout == "16\n"
