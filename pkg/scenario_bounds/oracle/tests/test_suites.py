import pytest

from scenario_bounds.oracle.suites import (
    SUITES,
    convergence_suite,
    coverage_suite,
    ordering_suite,
    overestimation_suite,
    rank_alignment_suite,
    run_suites,
    widening_suite,
)


def test_coverage_holds_with_the_true_violation():
    report = coverage_suite(4, seed=11, n=2000, n_samples=20000)
    assert report.passed, report.failures
    assert report.checks == 4 * 3 * 2
    assert report.details["worst_margin"] >= -0.01


def test_understated_violation_loses_coverage():
    report = coverage_suite(2, seed=11, understate=True, n=2000, n_samples=20000)
    assert not report.passed
    assert any("coverage" in failure for failure in report.failures)


def test_rank_alignment():
    report = rank_alignment_suite(10, seed=5, exhaustive_max_n=5)
    assert report.passed, report.failures


def test_overestimation():
    report = overestimation_suite(5, seed=5, n=4000)
    assert report.passed, report.failures
    assert report.details["largest_true_epsilon"] > 0


def test_ordering_and_widening():
    assert ordering_suite(2, seed=5, n=500, n_samples=4000).passed
    assert widening_suite(2, seed=5, n=500, n_samples=4000).passed


def test_convergence():
    report = convergence_suite(seed=5, label_counts=(11, 23, 51, 101, 201), n_samples=5000)
    assert report.passed, report.failures
    assert report.details["interpolated_widths"] == [0.0] * 5


def test_run_suites_selects_by_name():
    reports = run_suites(["rank-alignment"], trials=3, seed=1)
    assert [report.name for report in reports] == ["rank-alignment"]
    assert reports[0].as_dict()["passed"] is True
    assert set(SUITES) == {
        "coverage",
        "rank-alignment",
        "overestimation",
        "ordering",
        "widening",
        "convergence",
    }


@pytest.mark.slow
def test_acceptance_scale(settings):
    reports = run_suites(None, trials=100, seed=settings.SCENARIO_BOUNDS_SEED)
    assert all(report.passed for report in reports), [r.as_dict() for r in reports if not r.passed]
