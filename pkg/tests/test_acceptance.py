"""Acceptance criteria 1-8, one test each, run through the suite cases.

Every criterion prints one pass/fail line (also repeated in the terminal
summary).  Arithmetic is exact, so the only tolerances are the runtime
budgets.
"""
import functools

import pytest

from stabletwist.suite import run_case as _run_case

from conftest import ACCEPTANCE_LINES

CRITERIA = [
    (1, "1-catalog", 10.0),
    (2, "2-restriction", None),
    (3, "3-periodicity", None),
    (4, "4-spherical-dihedral", 60.0),
    (5, "5-semidihedral", 120.0),
    (6, "6-klein-pn", None),
    (7, "7-extraspecial", 300.0),
    (8, "8-properties", None),
]


@functools.lru_cache(maxsize=None)
def run_case(case):
    return _run_case(case, level="quick", seed=0)


@pytest.mark.parametrize("number,case,budget", CRITERIA, ids=[c for _, c, _ in CRITERIA])
def test_criterion(number, case, budget):
    result = run_case(case)
    in_budget = budget is None or result.wall_time < budget
    ok = result.verdict == "pass" and in_budget
    line = "CRITERION %d (%s): %s  [%s, %.1fs%s]" % (
        number, case, "PASS" if ok else "FAIL", result.verdict, result.wall_time,
        "" if budget is None else " / budget %.0fs" % budget)
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert result.verdict == "pass", result.details.get("failures") or result.details
    assert in_budget, "runtime %.1fs exceeds %.0fs" % (result.wall_time, budget)


def test_criterion4_details():
    details = run_case("4-spherical-dihedral").details
    for q in (2, 3):
        name = "dihedral:q=%d:p=2" % q
        assert details[name + ":dim tau(k)"]["got"] == 2 * q + 1
        neg = details[name + ":tau^2(k) !~ Omega^-2(k)"]
        assert neg["verdict"] == "no"


def test_criterion7_negative_verdicts_are_certified():
    details = run_case("7-extraspecial").details
    for j in range(-4, 5):
        assert details["rho(k) !~ Omega^%d(k)" % j]["verdict"] == "no"
