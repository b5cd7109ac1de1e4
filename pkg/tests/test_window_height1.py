"""
tests/test_window_height1.py

Window increments given the lead, epoch matrices and the height-1 probability.
"""

import math

import numpy as np
import pytest

from src.analytic import (
    analyze_height1,
    matrix_builder,
    p_w_given_l,
    poisson_pmf,
    transition_matrices,
    transition_matrix,
    violation_probability_height1,
    window_increment_pmf,
)
from src.core.params import ProtocolParams


def test_window_opens_quietly_with_probability(bitcoin):
    assert p_w_given_l(bitcoin, 0, 0) == pytest.approx(math.exp(-1 / 60), rel=1e-12)


@pytest.mark.parametrize("lead", [-3, -1, 0, 1, 2, 5])
def test_window_pmf_is_normalized(bitcoin, etc, lead):
    for params in (bitcoin, etc):
        values = window_increment_pmf(params, lead, 80)
        assert np.all(values >= 0)
        assert values.sum() == pytest.approx(1.0, abs=1e-9)


def test_negative_leads_share_poisson_vector(etc):
    expected = poisson_pmf(np.arange(11), etc.a * etc.delta)
    for lead in (-1, -4):
        assert np.allclose(window_increment_pmf(etc, lead, 10), expected)


def test_window_below_lead_is_poisson(etc):
    values = window_increment_pmf(etc, 3, 6)
    assert np.allclose(values[:3], poisson_pmf(np.arange(3), etc.a * etc.delta))


def test_window_without_delay_is_a_point_mass(zero_delay):
    for lead in (-2, 0, 3):
        values = window_increment_pmf(zero_delay, lead, 5)
        assert values[0] == pytest.approx(1.0)
        assert values[1:].sum() == pytest.approx(0.0)


def test_window_rejects_negative_increment(bitcoin):
    with pytest.raises(ValueError):
        p_w_given_l(bitcoin, -1, 0)


def test_epoch_matrices_are_stochastic(bitcoin, etc):
    for params in (bitcoin.with_depth(5), etc.with_depth(5)):
        matrices = transition_matrices(params)
        assert [m.label for m in matrices] == [f"P({j})" for j in range(1, 6)]
        for matrix in matrices:
            assert matrix.k == 5
            assert matrix.is_stochastic()
            assert matrix.values[5, 5] == 1.0


def test_first_epoch_corner(bitcoin):
    matrix = transition_matrix(bitcoin, 1)
    quiet = math.exp(-bitcoin.lambda_ * bitcoin.delta)
    assert matrix.values[0, 0] == pytest.approx(bitcoin.h / bitcoin.lambda_ * quiet)


def test_matrices_are_identity_without_adversary_or_delay(honest_only):
    for matrix in transition_matrices(honest_only):
        assert np.allclose(matrix.values, np.eye(honest_only.k + 1))
    assert violation_probability_height1(honest_only) == 0.0


def test_honest_delay_alone_can_split(honest_only):
    delayed = honest_only.with_delay(1.0)
    assert violation_probability_height1(delayed) > 0.0


def test_epoch_index_is_checked(bitcoin):
    builder = matrix_builder(bitcoin)
    with pytest.raises(ValueError):
        builder.epoch_matrix(0)
    with pytest.raises(ValueError):
        builder.epoch_matrix(bitcoin.k + 1)


def test_depth_one_without_delay_is_twice_beta():
    for beta in (0.1, 0.25, 0.4):
        params = ProtocolParams.from_rates(1.0, beta, 0.0, k=1)
        assert violation_probability_height1(params) == pytest.approx(2 * beta, abs=1e-12)


def test_full_product_matches_row_propagation(etc):
    params = etc.with_depth(6)
    by_rows = violation_probability_height1(params)
    by_product = violation_probability_height1(params, full_matrix=True)
    assert by_rows == pytest.approx(by_product, abs=1e-14)


def test_probability_decreases_with_depth(bitcoin):
    values = [violation_probability_height1(bitcoin.with_depth(k)) for k in range(1, 8)]
    assert all(later < earlier for earlier, later in zip(values, values[1:]))
    assert 0.0 < values[-1] < values[0] < 1.0


def test_result_carries_truncation_bound(bitcoin):
    result = analyze_height1(bitcoin)
    assert result.k == bitcoin.k
    assert 0.0 <= result.e_tail_bound < 1e-6
    assert result.lead_truncation is None
