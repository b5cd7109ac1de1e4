"""
src/analytic/kernels.py

Distribution kernels and fixed-node Gauss-Legendre quadrature.

Poisson and Erlang densities are evaluated in log space so large shapes do not
overflow.
"""

from functools import lru_cache
from typing import Tuple

import numpy as np
from scipy.special import gammaln, roots_legendre, xlogy


def poisson_pmf(n, mean):
    """f1(n; mean), broadcasting over n and mean; zero for negative n"""
    n = np.asarray(n, dtype=float)
    mean = np.asarray(mean, dtype=float)
    valid = n >= 0
    safe_n = np.where(valid, n, 0.0)
    log_p = xlogy(safe_n, mean) - mean - gammaln(safe_n + 1.0)
    return np.where(valid, np.exp(log_p), 0.0)


def erlang_pdf(t, shape: int, rate: float):
    """f2(t; shape, rate) for shape >= 1; identically zero when rate is zero"""
    t = np.asarray(t, dtype=float)
    if shape < 1:
        raise ValueError(f"Erlang shape must be at least 1, got {shape}")
    if rate == 0:
        return np.zeros_like(t)
    log_p = (
        shape * np.log(rate)
        + xlogy(shape - 1.0, t)
        - rate * t
        - gammaln(float(shape))
    )
    return np.where(t >= 0, np.exp(log_p), 0.0)


def jumper_interarrival_pdf(t, h: float, delta: float):
    """Shifted exponential: delta plus an exponential(h) wait"""
    t = np.asarray(t, dtype=float)
    return np.where(t > delta, h * np.exp(-h * (t - delta)), 0.0)


def geometric_weights(a: float, h: float, count: int) -> np.ndarray:
    """(h/lambda)(a/lambda)^i: A-blocks mined before the next H-block"""
    lam = a + h
    i = np.arange(count)
    if a == 0:
        return np.where(i == 0, 1.0, 0.0)
    return (h / lam) * np.exp(i * np.log(a / lam))


@lru_cache(maxsize=16)
def _legendre(nodes: int) -> Tuple[np.ndarray, np.ndarray]:
    x, w = roots_legendre(nodes)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_legendre(nodes: int, lo: float, hi: float) -> Tuple[np.ndarray, np.ndarray]:
    """Nodes and weights mapped affinely onto [lo, hi]"""
    x, w = _legendre(nodes)
    half = 0.5 * (hi - lo)
    return lo + half * (x + 1.0), half * w


def integrate(func, lo: float, hi: float, nodes: int = 64) -> float:
    t, w = gauss_legendre(nodes, lo, hi)
    return float(np.dot(w, func(t)))
