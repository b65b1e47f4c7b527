"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Each criterion runs the same bundled suite the ``trusses suite NAME`` command
runs, checks the suite's pass flag and the specific numbers it reports, and
enforces the wall-clock budget.
"""
import subprocess
import sys
import time

import pytest

from trusses.suites import SUITES

pytestmark = pytest.mark.acceptance


def timed(name):
    start = time.perf_counter()
    r = SUITES[name]()
    return r, time.perf_counter() - start


def gate(record, number, title, ok, elapsed, budget, detail=""):
    passed = bool(ok) and elapsed < budget
    record(number, title, passed, f"{elapsed:.2f}s of {budget}s{'; ' + detail if detail else ''}")
    assert ok, detail or title
    assert elapsed < budget, f"{elapsed:.1f}s exceeds {budget}s"


def test_criterion_01_coboundary_squares_to_basepoint(record_criterion):
    r, t = timed("complex")
    res = r.result
    ok = r.passed and res["failures"] == 0 and res["checks"] > 0
    gate(record_criterion, 1, "coboundary of a coboundary is the base point", ok, t, 60, f"{res['checks']} checks")


def test_criterion_02_left_projection_cohomology(record_criterion):
    r, t = timed("lzp")
    rows = r.result["groups"]
    ok = r.passed and {row["p"] for row in rows} == {2, 3} and all(
        (row["H0"], row["H1"], row["H2"]) == (1, row["p"], 1) for row in rows
    )
    gate(record_criterion, 2, "left projection cohomology has sizes 1, p, 1", ok, t, 120)


def test_criterion_03_basepoint_independence(record_criterion):
    r, t = timed("basepoint")
    rows = r.result["trusses"]
    ok = r.passed and len(rows) == 4 and all(len(set(row["class_counts"])) == 1 for row in rows)
    gate(record_criterion, 3, "transport identifies cocycles and coboundaries across base points", ok, t, 30)


def test_criterion_04_derivations_are_cocycles(record_criterion):
    r, t = timed("derivations")
    rows = r.result["rows"]
    ok = r.passed and len(rows) == 4 * (2 + 3 + 4 + 4) and all(row["derivations"] == row["cocycles"] for row in rows)
    gate(record_criterion, 4, "derivations correspond to degree-one cocycles", ok, t, 30, f"{len(rows)} truss/base point pairs")


def test_criterion_05_associativity_iff_cocycle(record_criterion):
    r, t = timed("second")
    res = r.result
    ok = r.passed and res["mismatches"] == 0 and res["associative"] == res["cocycle"] and res["pairs"] > 0
    gate(
        record_criterion, 5, "deformed product associative iff torsion is a 2-cocycle", ok, t, 120,
        f"{res['pairs']} operator/base point pairs, {res['mismatches']} mismatches",
    )


def test_criterion_06_integer_classification(record_criterion):
    r, t = timed("classify-z")
    res = r.result
    triples = {tuple(row["params"]) for row in res["triples"]}
    first = next(row for row in res["triples"] if row["params"] == [1, 0, 0])
    tors = res["torsion_2m_plus_3"]
    ok = (
        r.passed
        and triples == {(1, 0, 0), (1, 1, 0), (2, 3, 3), (6, 3, 1)}
        and all(row["agreement"] for row in res["triples"])
        and first["linear_family"] and first["one_minus_q_family"]
        and tors["polynomial"] == -12 and tors["direct_values"] == [-12]
    )
    gate(record_criterion, 6, "integer Nijenhuis operators match the closed-form families", ok, t, 10)


def test_criterion_07_powers_and_compatibility(record_criterion):
    r, t = timed("powers")
    names = [row["operator"] for row in r.result["operators"]]
    ok = r.passed and "3m on T(Z;1,0,0)" in names and any(n.startswith("constant") and "Z4" in n for n in names)
    gate(record_criterion, 7, "powers stay Nijenhuis and compatible; odd combinations are Nijenhuis", ok, t, 30)


def test_criterion_08_affine_suite(record_criterion):
    r, t = timed("affine")
    checks = r.result["checks"]
    ok = r.passed and r.config["size"] == 3 and r.config["trials"] == 64 and all(checks.values())
    failed = [k for k, v in checks.items() if not v]
    gate(record_criterion, 8, "affine Nijenhuis operators and their Lie brackets", ok, t, 30, f"{len(checks)} checks, failed {failed}")


def test_criterion_09_enumeration(record_criterion):
    r, t = timed("enumerate")
    res = r.result
    ok = r.passed and res["class_count"] == 23 and res["ring_class_count"] == 8
    gate(record_criterion, 9, "Klein four-group carries 23 truss classes and 8 ring classes", ok, t, 300)


INVOCATIONS = [["suite", name] for name in SUITES] + [
    ["truss", "enumerate", "--group", "[2,2]", "--expect-classes", "23", "--expect-ring-classes", "8"],
    ["nijenhuis", "classify-z", "--a", "1", "--b", "0", "--c", "0", "--bound", "50"],
    ["affine", "verify", "--size", "3", "--lambda1", "2", "--lambda2", "-1/2", "--trials", "64", "--seed", "0"],
    ["affine", "bracket", "--size", "3", "--seed", "0"],
]


def test_criterion_10_byte_identical_reruns(record_criterion):
    def run(argv):
        p = subprocess.run([sys.executable, "-m", "trusses.cli", *argv], capture_output=True, check=False)
        return p.returncode, p.stdout

    differing = []
    for argv in INVOCATIONS:
        first, second = run(argv), run(argv)
        if first != second or first[0] != 0 or not first[1]:
            differing.append(" ".join(argv))
    ok = not differing
    record_criterion(10, "re-running a criterion's command gives byte-identical output", ok, f"{len(INVOCATIONS)} commands, differing {differing}")
    assert ok, differing
