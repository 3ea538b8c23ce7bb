import pytest

from ttw.report import FAIL, SKIPPED
from ttw.verify import SUITES, run_suite, syzygy_degree


def test_syzygy_degree():
    assert [syzygy_degree(k) for k in (1, 2, 3, 4)] == [3, 4, 6, 8]


def test_k1_every_suite_passes():
    report = run_suite(1)
    assert report.passed, report.to_text()
    ids = [c.check_id for c in report.checks]
    assert "k=1:syzygy:find" in ids and "k=1:doubleI2:none-at-degree-1" in ids


@pytest.mark.parametrize("suite", ("commutators", "spectrum", "hidden", "conjecture"))
@pytest.mark.parametrize("k", (2, 3, 4))
def test_light_suites(k, suite):
    report = run_suite(k, suite)
    assert report.passed, report.to_text()


def test_k2_closures_and_syzygy():
    for suite in ("closures", "syzygies"):
        report = run_suite(2, suite)
        assert report.passed, report.to_text()
        assert not any(c.status == SKIPPED for c in report.checks)


def test_k4_heavy_checks_are_skipped():
    report = run_suite(4, "syzygies")
    statuses = {c.check_id: c.status for c in report.checks}
    assert statuses["k=4:syzygy:find"] == SKIPPED
    assert statuses["k=4:syzygy_omega0:table-expands"] != FAIL
    assert report.passed


def test_unknown_suite():
    with pytest.raises(ValueError):
        run_suite(1, "everything")
    assert "conjecture" in SUITES
