"""
src/analytic/target.py

Exact violation probability for a target block: the first H-block mined after
a time s at which the pre-mining lead process is stationary.

The lead just before the next jumper is the lead left at the last jumper (pmf
s), plus A-blocks mined during the age G of that jumper, plus A-blocks mined
until the next jumper. Integrals over the age use quadrature on [0, delta] and
closed forms on the exponential tail; the wait for an H-block integrates to a
geometric mixture of Poisson terms.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np
import structlog

from src.core.config import SolverConfig, get_default_config
from src.core.params import ProtocolParams

from .height1 import (
    TransitionMatrix,
    ViolationResult,
    matrix_builder,
    no_violation_mass,
)
from .kernels import gauss_legendre, geometric_weights, poisson_pmf
from .race import PostJumperLeadPmf, e_pmf
from .series import TruncatedSeries

logger = structlog.get_logger(__name__)


@dataclass(frozen=True)
class AgeDensity:
    """Stationary age of the highest jumper at a fixed time"""

    h: float
    delta: float

    @property
    def normalizer(self) -> float:
        return self.delta + 1.0 / self.h

    @property
    def window_mass(self) -> float:
        """P(G <= delta)"""
        return self.delta / self.normalizer

    def pdf(self, g):
        g = np.asarray(g, dtype=float)
        tail = np.exp(-self.h * np.clip(g - self.delta, 0.0, None))
        return np.where(g < 0, 0.0, tail / self.normalizer)

    def cdf(self, g):
        g = np.asarray(g, dtype=float)
        flat = np.clip(g, 0.0, self.delta) / self.normalizer
        tail = (1.0 - np.exp(-self.h * np.clip(g - self.delta, 0.0, None))) / (
            self.h * self.normalizer
        )
        return flat + tail


@dataclass(frozen=True)
class LeadJointPmf:
    """f3(n) = P(lead = n, target is a jumper); f4(n) = P(lead = n, not a jumper)"""

    f3: np.ndarray
    f4: np.ndarray

    @property
    def truncation(self) -> int:
        return len(self.f3) - 1

    def total(self) -> float:
        return float(self.f3.sum() + self.f4.sum())

    def jumper_probability(self) -> float:
        return float(self.f3.sum())


def age_density(params: ProtocolParams) -> AgeDensity:
    return AgeDensity(params.h, params.delta)


def lead_after_jumper_pmf(
    params: ProtocolParams, max_i: int, config: Optional[SolverConfig] = None
) -> PostJumperLeadPmf:
    """s(0) = e(0) + e(1), s(i) = e(i+1)"""
    e = e_pmf(params, max_i + 1, config)
    values = e.values[1:].copy()
    values[0] += e.values[0]
    return PostJumperLeadPmf(values, e.tail_bound)


def _h_wait_counts(params: ProtocolParams, spans: np.ndarray, size: int) -> np.ndarray:
    """
    K[q, m] = P(Poisson(a(spans[q] + T)) = m) with T ~ exponential(h).

    The count over T alone is geometric, so each row is a Poisson-geometric
    convolution; shape (len(spans), size).
    """
    geometric = TruncatedSeries(geometric_weights(params.a, params.h, size))
    counts = poisson_pmf(np.arange(size)[None, :], params.a * spans[:, None])
    return np.stack([(TruncatedSeries(row) * geometric).c for row in counts])


def lead_joint_pmf(
    params: ProtocolParams, max_n: int, config: Optional[SolverConfig] = None
) -> LeadJointPmf:
    """
    Joint pmf of the lead before the next jumper and the target's jumper status.

    Raises:
        OutOfToleranceError: 1/a > 1/h + delta fails
    """
    params.require_tolerance()
    config = config or get_default_config()
    a, h, lam, delta = params.a, params.h, params.lambda_, params.delta
    size = max_n + 1
    density = age_density(params)

    s = lead_after_jumper_pmf(params, max_n, config)
    lead = TruncatedSeries(s.values[:size])

    g, weights = gauss_legendre(config.quadrature_nodes(), 0.0, delta)
    weights = weights * density.pdf(g)
    quiet = np.exp(-h * (delta - g))

    counts_in_age = poisson_pmf(np.arange(size)[None, :], a * g[:, None])
    waits = _h_wait_counts(params, delta - g, size)
    mixed = np.stack(
        [
            (TruncatedSeries(age_row) * TruncatedSeries(wait_row)).c
            for age_row, wait_row in zip(counts_in_age, waits)
        ]
    )
    jumper = (weights * quiet) @ mixed
    not_jumper = (weights * (1.0 - quiet)) @ mixed

    # age beyond delta: int_delta^inf f1(g a; j) f_G(g) dg in closed form
    j = np.arange(size)
    beyond = TruncatedSeries(poisson_pmf(j, a * delta)) * TruncatedSeries(
        np.exp(j * np.log(a / lam)) / lam if a > 0 else np.where(j == 0, 1.0 / lam, 0.0)
    )
    beyond = beyond * (1.0 / density.normalizer)
    wait_only = _h_wait_counts(params, np.zeros(1), size)[0]
    jumper = jumper + (beyond * TruncatedSeries(wait_only)).c

    f3 = (lead * TruncatedSeries(jumper)).c
    f4 = (lead * TruncatedSeries(not_jumper)).c
    logger.debug(
        "lead_joint_pmf",
        max_n=max_n,
        jumper_mass=float(f3.sum()),
        total=float(f3.sum() + f4.sum()),
    )
    return LeadJointPmf(np.clip(f3, 0.0, None), np.clip(f4, 0.0, None))


def first_epoch_matrices(
    params: ProtocolParams,
    lead: int,
    jumper: bool,
    config: Optional[SolverConfig] = None,
) -> TransitionMatrix:
    """P^(1) for a jumper target with this lead, P'^(2) otherwise"""
    return matrix_builder(params, config).first_epoch_matrix(lead, jumper)


def analyze_target(
    params: ProtocolParams, config: Optional[SolverConfig] = None
) -> ViolationResult:
    """
    Violation probability of a general target block.

    Leads of k or more always lead to a violation, so the lead pmf is truncated
    at k-1.
    """
    params.require_tolerance()
    config = config or get_default_config()
    k = params.k
    e = e_pmf(params, k + config.series_extra_terms(), config)
    joint = lead_joint_pmf(params, k - 1, config)
    builder = matrix_builder(params, config)

    # P^(2..k) and P'^(3..k) coincide with the height-1 epochs
    later = builder.product(3)
    from_two = builder.epoch_matrix(2).values @ later if k >= 2 else np.eye(k + 1)

    safe = 0.0
    for l in range(k):
        opening = builder.first_epoch_matrix(l, jumper=True).values[l]
        safe += joint.f3[l] * no_violation_mass(e, opening @ from_two, k, start=l)
        if k >= 2:
            opening = builder.first_epoch_matrix(l, jumper=False).values[l + 1]
            distribution = opening @ later
        else:
            distribution = np.eye(k + 1)[l + 1]
        safe += joint.f4[l] * no_violation_mass(e, distribution, k, start=l)

    probability = float(np.clip(1.0 - safe, 0.0, 1.0))
    logger.debug("target_probability", k=k, probability=probability)
    return ViolationResult(probability, k, e.tail_bound, lead_truncation=k - 1)


def violation_probability_target(
    params: ProtocolParams, config: Optional[SolverConfig] = None
) -> float:
    return analyze_target(params, config).probability
