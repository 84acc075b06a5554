"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line."""
from __future__ import annotations

import pytest

from optikit.suites import CRITERIA, run_suite


def _check_1(d):
    assert len(d["configurations"]) == 64 and not d["failures"]


def _check_2(d):
    assert len(d["configurations"]) == 64 and not d["failures"]


def _check_3(d):
    assert not d["failures"]


def _check_4(d):
    assert d["lawful"]["lens"] == 2 and d["lawful"]["iso"] == 2


def _check_5(d):
    assert d["passed"] and not d["failures"] and d["details"]["max_size"] == 3


def _check_6(d):
    assert all(d[k]["passed"] and d[k]["checked"] > 0 for k in ("lens", "prism", "iso"))
    assert d["lens"]["details"]["diagonal_images"] > 0


def _check_7(d):
    assert all(bad == 0 and good > 0 for good, bad in d["squares"].values())
    assert d["decomposed"] == d["classes"] == 64


def _check_8(d):
    assert d["roundtrips"] == d["classes"] == 64
    assert d["validation"]["ok"] and not d["mutation"]["ok"]


def _check_9(d):
    for kind, n in (("lens", 64), ("prism", 64), ("iso", 16)):
        assert d[kind]["classes"] == d[kind]["agree"] == n


def _check_10(d):
    assert d["traversals"] and d["lawful_linear"] == 2 and d["equivalence_failures"] == 0


def _check_11(d):
    assert d["lenses"] and d["composites"] > 0 and not d["failures"]


def _check_12(d):
    w = d["witness"]
    assert w["f"]["dom"] == 0 and w["g1"]["table"] != w["g2"]["table"]


def _check_13(d):
    sizes = {tuple(r["sizes"]): r for r in d["rows"]}
    for key in ((2, 2), (4, 2)):
        assert sizes[key]["lawful"] == sizes[key]["decomposed"] > 0


CHECKS = {n: globals()[f"_check_{n}"] for n in range(1, 14)}


@pytest.mark.parametrize("criterion", range(1, 14))
def test_criterion(criterion, capsys):
    res = run_suite(CRITERIA[criterion])
    ok = res.passed
    try:
        CHECKS[criterion](res.details)
    except (AssertionError, KeyError, TypeError):
        ok = False
    line = res.line() if ok == res.passed else f"[FAIL] #{criterion} {res.id}: details check failed"
    with capsys.disabled():
        print(f"\n{line}")
    assert res.passed, res.summary
    CHECKS[criterion](res.details)
