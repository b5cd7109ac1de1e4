"""
src/analytic/race.py

Distribution of the race between the adversarial Poisson process and the
jumper renewal process: e(i) = P(M = i) where M is the supremum of the
adversarial count minus the jumper count.

The generating function is (1-r)c / (h - exp((1-r)a*delta)(h + a - a*r) r) with
c = h - a - h*a*delta. Numerator and denominator share the root r = 1; dividing
it out turns the denominator coefficients into tail sums of the expanded
exponential term, and e(i) follows from a single series division.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np
import structlog

from src.core.config import SolverConfig, get_default_config
from src.core.errors import NumericalError
from src.core.params import ProtocolParams

from .series import TruncatedSeries

logger = structlog.get_logger(__name__)

# terms of the exponential expansion beyond the requested order; the factorial
# decay puts them far below double precision
_EXPANSION_SLACK = 60


@dataclass(frozen=True)
class RacePmf:
    """Truncated pmf values[0..I] with the unaccounted mass"""

    values: np.ndarray
    tail_bound: float

    @property
    def truncation(self) -> int:
        return len(self.values) - 1

    def __getitem__(self, i):
        return self.values[i]

    def __len__(self) -> int:
        return len(self.values)

    def tail(self, deficit: int) -> float:
        """P(M >= deficit)"""
        if deficit <= 0:
            return 1.0
        if deficit > len(self.values):
            raise ValueError(
                f"deficit {deficit} exceeds truncation {self.truncation}"
            )
        return float(max(0.0, 1.0 - np.sum(self.values[:deficit])))


PostJumperLeadPmf = RacePmf


def _denominator_tail_sums(params: ProtocolParams, order: int) -> TruncatedSeries:
    """Coefficients of (h - exp((1-r)x)(h + a - a r) r) / (1 - r), x = a*delta"""
    a, h = params.a, params.h
    x = a * params.delta
    terms = order + _EXPANSION_SLACK
    expansion = TruncatedSeries.exp_linear(x, -x, terms)
    linear = TruncatedSeries([h + a, -a], order=terms)
    return (expansion * linear).tail_sums()


def e_pmf(
    params: ProtocolParams, max_i: int, config: Optional[SolverConfig] = None
) -> RacePmf:
    """
    Race pmf e(0..max_i) by truncated series division.

    Raises:
        OutOfToleranceError: 1/a > 1/h + delta fails
        NumericalError: a coefficient is negative beyond the configured tolerance
    """
    if max_i < 0:
        raise ValueError(f"max_i must be non-negative, got {max_i}")
    params.require_tolerance()
    config = config or get_default_config()

    if params.a == 0:
        values = np.zeros(max_i + 1)
        values[0] = 1.0
        return RacePmf(values, 0.0)

    order = max_i + config.series_guard_terms()
    c = params.h - params.a - params.h * params.a * params.delta
    denominator = TruncatedSeries(_denominator_tail_sums(params, order).c, order=order)
    numerator = TruncatedSeries.constant(c, order)
    values = (numerator / denominator).c[: max_i + 1].copy()

    floor = -config.series_negative_tolerance()
    if values.min() < floor:
        i = int(values.argmin())
        raise NumericalError(
            f"race pmf coefficient e({i}) = {values[i]:.3e} is negative; "
            "series expansion is unstable for these parameters"
        )
    np.clip(values, 0.0, None, out=values)

    tail = float(max(0.0, 1.0 - values.sum()))
    logger.debug("race_pmf", max_i=max_i, e0=float(values[0]), tail_bound=tail)
    return RacePmf(values, tail)


def m_tail(params: ProtocolParams, deficit: int, config: Optional[SolverConfig] = None) -> float:
    """P(M >= deficit)"""
    if deficit < 0:
        raise ValueError(f"deficit must be non-negative, got {deficit}")
    if deficit == 0:
        return 1.0
    return e_pmf(params, deficit - 1, config).tail(deficit)


def race_tail_ratio(
    params: ProtocolParams, max_i: int = 400, config: Optional[SolverConfig] = None
) -> float:
    """Geometric decay rate of e(i), read from the deepest representable terms"""
    if params.a == 0:
        return 0.0
    values = e_pmf(params, max_i, config).values
    usable = np.flatnonzero(values > 1e-250)
    if len(usable) < 2:
        return 0.0
    i = int(usable[-1])
    return float(values[i] / values[i - 1])
