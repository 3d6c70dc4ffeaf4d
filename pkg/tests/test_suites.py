"""Tests for the verification suites."""

import pytest

from specmeas.exceptions import BinUnderflow
from specmeas.suites import SUITES, SuiteConfig, run_suite

SMALL_CONFIGS = {
    "uniform-moments-circle": SuiteConfig(3, 5000),
    "cue-coefficients": SuiteConfig(3, 5000),
    "cbe-vs-cue": SuiteConfig(3, 2000),
    "sun": SuiteConfig(3, 5000),
    "so2n": SuiteConfig(2, 2000),
    "jacobi-oneof": SuiteConfig(2, 1000),
    "bizth": SuiteConfig(2, 2000),
    "unif2": SuiteConfig(3, 1000),
    "eta": SuiteConfig(1, 4000),
}


def test_every_suite_has_a_small_configuration():
    """Every registered suite has a fast configuration."""
    assert set(SMALL_CONFIGS) == set(SUITES)


@pytest.mark.parametrize("name", sorted(SMALL_CONFIGS))
def test_suite_passes(rng, name):
    """Each suite passes at its small configuration."""
    report = run_suite(name, rng, SMALL_CONFIGS[name])
    failed = [r.name for r in report.reports if not r.passed]
    assert report.passed, failed


@pytest.mark.parametrize(
    "name, config",
    [
        ("uniform-moments-circle", SuiteConfig(3, 2000, negative_control=True)),
        ("cue-coefficients", SuiteConfig(3, 2000, negative_control=True)),
        ("eta", SuiteConfig(1, 4000, negative_control=True)),
        ("sun", SuiteConfig(3, 3000, negative_control=True)),
        ("so2n", SuiteConfig(3, 3000, negative_control=True)),
        ("jacobi-oneof", SuiteConfig(3, 3000, negative_control=True)),
        ("bizth", SuiteConfig(3, 3000, negative_control=True)),
        ("unif2", SuiteConfig(4, 3000, negative_control=True)),
    ],
)
def test_negative_controls_fail(rng, name, config):
    """Deliberately wrong laws fail their suite."""
    assert not run_suite(name, rng, config).passed


def test_reports_share_the_family_level(rng):
    """Reports in one suite split the family level evenly."""
    report = run_suite("eta", rng, SuiteConfig(1, 4000), family_alpha=0.01)
    assert len(report.reports) == 3
    assert all(r.alpha == pytest.approx(0.01 / 3) for r in report.reports)
    record = report.to_dict()
    assert record["suite"] == "eta"
    assert record["passed"] == report.passed
    assert len(record["reports"]) == 3


def test_unknown_suite(rng):
    """Unknown suite names raise KeyError."""
    with pytest.raises(KeyError, match="unknown suite"):
        run_suite("gue", rng, SuiteConfig(3, 100))


def test_too_few_samples_for_binning(rng):
    """Binned tests refuse samples too small for their cells."""
    with pytest.raises(BinUnderflow):
        run_suite("eta", rng, SuiteConfig(1, 200))


@pytest.mark.slow
@pytest.mark.parametrize(
    "name, config",
    [
        ("uniform-moments-circle", SuiteConfig(8, 20_000)),
        ("cue-coefficients", SuiteConfig(6, 10_000)),
        ("cbe-vs-cue", SuiteConfig(6, 10_000)),
        ("jacobi-oneof", SuiteConfig(5, 10_000)),
        ("bizth", SuiteConfig(2, 10_000)),
        ("bizth", SuiteConfig(3, 10_000)),
        ("unif2", SuiteConfig(6, 5_000)),
        ("so2n", SuiteConfig(5, 10_000)),
        ("so2n", SuiteConfig(4, 20_000)),
        ("bizth", SuiteConfig(4, 20_000)),
        ("unif2", SuiteConfig(5, 10_000)),
    ],
)
def test_suite_passes_at_scale(rng, name, config):
    """Suites pass at the acceptance sizes."""
    assert run_suite(name, rng, config).passed
