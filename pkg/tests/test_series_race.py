"""
tests/test_series_race.py

Truncated series arithmetic, distribution kernels and the race pmf.
"""

import math

import numpy as np
import pytest

from src.analytic import (
    TruncatedSeries,
    e_pmf,
    erlang_pdf,
    gauss_legendre,
    geometric_weights,
    m_tail,
    poisson_pmf,
    race_tail_ratio,
)
from src.analytic.kernels import integrate
from src.core.errors import OutOfToleranceError
from src.core.params import ProtocolParams


def test_series_division_by_one_minus_r():
    ones = TruncatedSeries.constant(1.0, 6) / TruncatedSeries([1.0, -1.0], order=6)
    assert np.allclose(ones.c, np.ones(7))


def test_series_product_keeps_lower_order():
    product = TruncatedSeries([1.0, 1.0], order=8) * TruncatedSeries([1.0, 2.0, 3.0])
    assert product.order == 2
    assert np.allclose(product.c, [1.0, 3.0, 5.0])


def test_exp_linear_matches_factorials():
    series = TruncatedSeries.exp_linear(0.0, -2.0, 6)
    expected = [(-2.0) ** q / math.factorial(q) for q in range(7)]
    assert np.allclose(series.c, expected)
    assert series(0.5) == pytest.approx(math.exp(-1.0), abs=1e-3)


def test_tail_sums_and_shift():
    series = TruncatedSeries([1.0, 2.0, 3.0])
    assert np.allclose(series.tail_sums().c, [6.0, 5.0, 3.0])
    assert np.allclose(series.shift(1).c, [0.0, 1.0, 2.0])


def test_series_rejects_zero_leading_denominator():
    with pytest.raises(ZeroDivisionError):
        TruncatedSeries([1.0, 1.0]) / TruncatedSeries([0.0, 1.0])


def test_kernels():
    assert poisson_pmf(-1, 2.0) == 0.0
    assert poisson_pmf(0, 0.0) == 1.0
    assert float(np.sum(poisson_pmf(np.arange(60), 3.0))) == pytest.approx(1.0)
    assert integrate(lambda t: erlang_pdf(t, 3, 2.0), 0.0, 40.0) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        erlang_pdf(1.0, 0, 1.0)

    weights = geometric_weights(0.25, 0.75, 5)
    assert weights.sum() == pytest.approx(1.0 - 0.25**5)
    assert np.array_equal(geometric_weights(0.0, 1.0, 3), [1.0, 0.0, 0.0])


def test_gauss_legendre_is_exact_for_polynomials():
    t, w = gauss_legendre(8, 1.0, 3.0)
    assert float(np.dot(w, t**5)) == pytest.approx((3.0**6 - 1.0) / 6.0)


def test_race_pmf_is_geometric_without_delay(zero_delay):
    ratio = zero_delay.a / zero_delay.h
    pmf = e_pmf(zero_delay, 30)
    expected = (1.0 - ratio) * ratio ** np.arange(31)
    assert np.allclose(pmf.values, expected, rtol=1e-10, atol=0.0)
    assert race_tail_ratio(zero_delay) == pytest.approx(ratio, rel=1e-6)


def test_race_pmf_bitcoin(bitcoin):
    pmf = e_pmf(bitcoin, 400)
    assert pmf[0] == pytest.approx(0.6625, abs=1e-12)
    assert m_tail(bitcoin, 1) == pytest.approx(0.3375, abs=1e-12)
    assert pmf.values.sum() == pytest.approx(1.0, abs=1e-9)
    assert pmf.tail_bound < 1e-9
    assert np.all(np.diff(pmf.values[:20]) < 0)


def test_race_pmf_without_adversary(honest_only):
    pmf = e_pmf(honest_only, 5)
    assert pmf[0] == 1.0 and pmf.values[1:].sum() == 0.0
    assert race_tail_ratio(honest_only) == 0.0


def test_tail_queries(bitcoin):
    assert m_tail(bitcoin, 0) == 1.0
    pmf = e_pmf(bitcoin, 3)
    assert pmf.tail(2) == pytest.approx(1.0 - pmf[0] - pmf[1])
    with pytest.raises(ValueError):
        pmf.tail(10)
    with pytest.raises(ValueError):
        e_pmf(bitcoin, -1)


def test_race_pmf_requires_tolerance():
    with pytest.raises(OutOfToleranceError):
        e_pmf(ProtocolParams(a=0.5, h=1.0, delta=1.0), 10)
