"""
tests/test_checks.py

Deterministic parts of the oracle-agreement suite.
"""

from src.cli import OracleSuite
from src.cli.checks import failed, summary
from src.models import CheckResult


def test_normalization_checks_pass(bitcoin):
    suite = OracleSuite(bitcoin)
    results = suite.race_normalization() + suite.window_normalization()
    assert [r.name for r in results] == ["race_pmf_normalization", "window_pmf_normalization"]
    assert not failed(results)


def test_monotonicity_checks_pass(etc):
    results = OracleSuite(etc, k_max=3).monotonicity()
    assert {r.name for r in results} == {
        "monotone_in_depth",
        "monotone_in_delay",
        "monotone_in_fraction",
    }
    assert not failed(results), [r.detail for r in failed(results)]


def test_zero_delay_dp_check_passes(zero_delay):
    results = OracleSuite(zero_delay, k_max=2).zero_delay_dp()
    assert [r.name for r in results] == ["zero_delay_dp_k1", "zero_delay_dp_k2"]
    assert not failed(results), [r.detail for r in results]


def test_dp_depths_default_to_at_most_three(bitcoin):
    assert OracleSuite(bitcoin, k_max=8).dp_k_max == 3
    assert OracleSuite(bitcoin, k_max=2).dp_k_max == 2
    assert OracleSuite(bitcoin, k_max=8, dp_k_max=5).dp_k_max == 5


def test_summary_lists_failures():
    results = [
        CheckResult(name="ok", passed=True, values=[1.0]),
        CheckResult(name="bad", passed=False),
    ]
    assert [r.name for r in failed(results)] == ["bad"]
    assert summary(results) == {"checks": 2, "failed": ["bad"], "values": {"ok": [1.0]}}
