"""One test per acceptance criterion.

The bundled suites are run once through the console entry point; each test
checks the counters of its criterion and prints a single PASS/FAIL line.
"""

import json
import re
import subprocess
import sys
import time
from math import comb

import pytest

from extpow.exterior import ExteriorContext


@pytest.fixture(scope="module")
def verify_run():
    t0 = time.perf_counter()
    proc = subprocess.run(
        [sys.executable, "-m", "extpow.cli", "verify", "--suite", "all", "--seed", "42"],
        capture_output=True,
        text=True,
    )
    elapsed = time.perf_counter() - t0
    timings = {m[0]: float(m[1]) for m in re.findall(r"\[([\w-]+)\] ([\d.]+)s", proc.stderr)}
    out = json.loads(proc.stdout)
    checks = {}
    for s in out["suites"]:
        for label, c in s["checks"].items():
            checks[label] = (c["passed"], c["total"])
    return {"rc": proc.returncode, "out": out, "checks": checks, "timings": timings, "elapsed": elapsed}


def _verdict(n, ok, detail):
    print(f"criterion {n}: {'PASS' if ok else 'FAIL'} ({detail})")
    assert ok, detail


def _all_pass(checks, label, total):
    return checks.get(label) == (total, total)


def test_criterion_01_functoriality(verify_run):
    c = verify_run["checks"]
    labels = [f"functor {n},{m} {r}" for n, m in ((4, 2), (5, 2), (6, 2), (6, 3)) for r in ("fp:7", "zmod:9")]
    ok = all(_all_pass(c, label, 200) for label in labels)
    t = verify_run["timings"]["functorial"]
    _verdict(1, ok and t < 30, f"{len(labels)} x 200 products exact, {t:.1f}s")


def test_criterion_02_formula_m(verify_run):
    c = verify_run["checks"]
    expected = sum(n * (n - 1) for n in range(2, 8) for m in range(1, min(3, n - 1) + 1))
    ok = _all_pass(c, "decomposition equals image", expected)
    ok = ok and _all_pass(c, "displayed commutator", 8)
    _verdict(2, ok, f"{expected} (n,m,i,j) cases symbolic, 8 worked examples sign-exact")


def test_criterion_03_commutator_classifier(verify_run):
    c = verify_run["checks"]
    expected = 0
    for n in range(2, 7):
        for m in range(1, min(3, n - 1) + 1):
            N = ExteriorContext(n, m).N
            expected += N * (N - 1) * n * (n - 1)
    ok = _all_pass(c, "classifier vs brute force", expected) and _all_pass(c, "(4,2) step calculations", 5)
    _verdict(3, ok, f"{expected} exhaustive cases, 5 step calculations")


def test_criterion_04_level_witnesses(verify_run):
    c = verify_run["checks"]
    rings = ("fp:5", "fp:7", "fp:11", "zmod:9")
    per_ring = [c.get(f"witnesses validate over {r}") for r in rings]
    ok = all(p is not None and p[0] == p[1] and p[1] % 50 == 0 and p[1] > 0 for p in per_ring)
    ok = ok and _all_pass(c, "height-raising walkthrough", 3)
    _verdict(4, ok, f"witness validations per ring {[p[1] if p else 0 for p in per_ring]}, walkthrough 3/3")


def test_criterion_05_z_factorization(verify_run):
    c = verify_run["checks"]
    ok = _all_pass(c, "z-factorization (6,2) exhaustive", 15 * 14) and _all_pass(c, "z-factorization (9,3) sampled", 100)
    _verdict(5, ok, "210 exhaustive (6,2) pairs, 100 sampled (9,3)")


def test_criterion_06_compute_level(verify_run):
    c = verify_run["checks"]
    ok = _all_pass(c, "level over Z", 1) and _all_pass(c, "level over F7", 6) and _all_pass(c, "n < 3m rejected", 1)
    _verdict(6, ok, "{4,6} -> (2) over Z, units -> (1) over F7, n < 3m rejected")


def test_criterion_07_stabilizer(verify_run):
    c = verify_run["checks"]
    names = ("(4,2) form", "(5,2) partition ideal + Pluecker", "(6,3) Pluecker")
    ok = all(_all_pass(c, f"image passes: {x}", 100) for x in names)
    ok = ok and all(_all_pass(c, f"random matrices rejected (>=95%): {x}", 1) for x in names)
    ok = ok and _all_pass(c, "Pluecker quadrics vanish on Grassmann points", 500)
    _verdict(7, ok, "100/100 images accepted, >=95/100 random rejected, 500 Grassmann points")


def test_criterion_08_congruence(verify_run):
    c = verify_run["checks"]
    ok = _all_pass(c, "congruence accepts image times level-A matrix", 50)
    ok = ok and _all_pass(c, "congruence rejects unit perturbation", 50)
    _verdict(8, ok, "50 accepted, 50 rejected over Z/9 with A = (3)")


def test_criterion_09_perfectness(verify_run):
    c = verify_run["checks"]
    ok = _all_pass(c, "perfectness (6,2) over Z/9", 15 * 14 * 3 + 30 * 9)
    _verdict(9, ok, "every generator is one commutator of generators")


def test_criterion_10_self_tests_and_runtime(verify_run):
    c = verify_run["checks"]
    ok = _all_pass(c, "Hall-Witt identity", 1000) and _all_pass(c, "degree-n commutator formula (random)", 1000)
    ok = ok and verify_run["rc"] == 0 and verify_run["out"]["ok"] and not verify_run["out"]["coverage"]["missing"]
    t = verify_run["elapsed"]
    _verdict(10, ok and t < 300, f"10^3 Hall-Witt and 10^3 commutator checks, full run {t:.0f}s, coverage complete")
