import inspect

from extpow import verify
from extpow.verify import PUBLIC_OPERATIONS, SuiteResult, coverage_gaps, report


def test_manifest_lists_each_operation_once():
    assert len(PUBLIC_OPERATIONS) == len(set(PUBLIC_OPERATIONS)) == 29


def test_declared_operations_are_really_called():
    # every operation a suite declares must be called somewhere in that module's suite code
    src = inspect.getsource(verify)
    body = src.split("def suite_functorial", 1)[1]
    for op in PUBLIC_OPERATIONS:
        assert f"{op}(" in body, op


def test_coverage_gaps_and_report():
    r = SuiteResult("x")
    r.use("det")
    r.record("a", True)
    assert "det" not in coverage_gaps([r])
    out = report([r], require_coverage=True)
    assert not out["ok"] and "minor" in out["coverage"]["missing"]
    r.record("a", False, "boom")
    assert report([r], require_coverage=False)["suites"][0]["failures"] == ["a: boom"]


def test_suites_are_seeded():
    a = verify.suite_functorial(seed=3, pairs=3).summary()
    b = verify.suite_functorial(seed=3, pairs=3).summary()
    assert a == b and a["ok"]
