import json

from ttw.report import FAIL, PASS, SKIPPED, VerificationReport


def test_overall_status():
    r = VerificationReport("demo")
    r.record("a", True)
    r.skip("b", "later")
    assert r.overall == PASS
    r.record("c", False, "broken")
    assert r.overall == FAIL
    assert [c.check_id for c in r.failures()] == ["c"]


def test_run_handles_results_and_errors():
    r = VerificationReport("demo")
    assert r.run("bool", lambda: True).status == PASS
    assert r.run("pair", lambda: (False, "nope")).detail == "nope"
    assert r.run("none", lambda: (None, "n/a")).status == SKIPPED
    crash = r.run("boom", lambda: 1 / 0)
    assert crash.status == FAIL and "ZeroDivisionError" in crash.detail


def test_output_without_timing_is_stable():
    def make():
        r = VerificationReport("demo")
        r.run("slow", lambda: sum(range(10000)) > 0)
        r.skip("later")
        return r

    assert make().dumps(timing=False) == make().dumps(timing=False)
    assert make().to_text(timing=False) == make().to_text(timing=False)
    doc = json.loads(make().dumps(timing=False))
    assert "elapsed_ms" not in doc["checks"][0]


def test_extend_prefixes():
    inner = VerificationReport("inner")
    inner.record("x", True)
    outer = VerificationReport("outer")
    outer.extend(inner, prefix="k=1:")
    assert outer.checks[0].check_id == "k=1:x"
