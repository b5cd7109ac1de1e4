"""
tests/test_target.py

General target block and the latency-security trade-off.
"""

import math

import numpy as np
import pytest

from src.analytic import (
    age_density,
    analyze_target,
    e_pmf,
    first_epoch_matrices,
    lead_after_jumper_pmf,
    lead_joint_pmf,
    required_depth,
    tradeoff_curve,
    violation_probability_target,
)
from src.models import Target


def test_age_density(bitcoin):
    density = age_density(bitcoin)
    assert float(density.pdf(0.0)) == pytest.approx(1 / 810)
    assert float(density.pdf(-1.0)) == 0.0
    assert density.window_mass == pytest.approx(10 / 810)
    assert float(density.cdf(bitcoin.delta)) == pytest.approx(density.window_mass)
    assert float(density.cdf(1e7)) == pytest.approx(1.0)


def test_lead_after_jumper_folds_first_two_terms(bitcoin):
    e = e_pmf(bitcoin, 6)
    s = lead_after_jumper_pmf(bitcoin, 5)
    assert s[0] == pytest.approx(e[0] + e[1])
    assert np.allclose(s.values[1:], e.values[2:7])


def test_lead_joint_pmf_is_normalized(bitcoin, etc):
    for params in (bitcoin, etc):
        joint = lead_joint_pmf(params, 80)
        assert joint.truncation == 80
        assert joint.total() == pytest.approx(1.0, abs=1e-8)


def test_jumper_probability_matches_renewal_argument(bitcoin, etc):
    for params in (bitcoin, etc):
        h, delta = params.h, params.delta
        expected = (2.0 - math.exp(-h * delta)) / (1.0 + h * delta)
        joint = lead_joint_pmf(params, 80)
        assert joint.jumper_probability() == pytest.approx(expected, abs=1e-8)


def test_opening_matrices(bitcoin):
    jumper = first_epoch_matrices(bitcoin, 1, jumper=True)
    assert jumper.label == "P(1)"
    assert jumper.values[1, 1] == pytest.approx(math.exp(-bitcoin.a * bitcoin.delta))
    assert jumper.is_stochastic()

    primed = first_epoch_matrices(bitcoin, 0, jumper=False)
    assert primed.label == "P'(2)"
    assert primed.lead == 0
    assert primed.values[1].sum() == pytest.approx(1.0)
    with pytest.raises(ValueError):
        first_epoch_matrices(bitcoin, bitcoin.k, jumper=True)


def test_target_without_adversary_or_delay_is_safe(honest_only):
    assert violation_probability_target(honest_only) == 0.0
    joint = lead_joint_pmf(honest_only, 3)
    assert joint.jumper_probability() == pytest.approx(1.0)


def test_target_probability_decreases_with_depth(bitcoin):
    values = [violation_probability_target(bitcoin.with_depth(k)) for k in range(1, 7)]
    assert all(later < earlier for earlier, later in zip(values, values[1:]))
    assert all(0.0 < v < 1.0 for v in values)


def test_target_result_records_lead_truncation(etc):
    result = analyze_target(etc)
    assert result.lead_truncation == etc.k - 1
    assert 0.0 < result.probability < 1.0


def test_tradeoff_curve(bitcoin):
    rows = tradeoff_curve(bitcoin, 4)
    assert [row.k for row in rows] == [1, 2, 3, 4]
    assert rows[1].latency_seconds == pytest.approx(1200.0)
    assert all(row.lead_truncation is None for row in rows)
    assert all(b.probability < a.probability for a, b in zip(rows, rows[1:]))

    general = tradeoff_curve(bitcoin, 2, Target.GENERAL)
    assert [row.lead_truncation for row in general] == [0, 1]


def test_required_depth(bitcoin):
    rows = tradeoff_curve(bitcoin, 5)
    assert required_depth(bitcoin, rows[2].probability, 5) == 3
    assert required_depth(bitcoin, 1e-30, 3) is None
    with pytest.raises(ValueError):
        required_depth(bitcoin, 1.5, 3)
    with pytest.raises(ValueError):
        tradeoff_curve(bitcoin, 0)
