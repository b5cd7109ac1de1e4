"""
src/analytic/height1.py

Exact violation probability of height 1 under the bait-and-switch attack.

Epoch j runs between successive "jumper + delta" instants. The state Y is the
adversarial branch height relative to the honest progress, capped at k; its
per-epoch transitions are the (k+1)x(k+1) matrices P^(j), where the geometric
number of A-blocks mined before the next jumper is mixed with the window
increment W given the lead j-1-y-i.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional

import numpy as np
import structlog

from src.core.config import SolverConfig, get_default_config
from src.core.errors import NumericalError
from src.core.params import ProtocolParams

from .kernels import geometric_weights
from .race import RacePmf, e_pmf
from .window import WindowTable, window_table

logger = structlog.get_logger(__name__)

ROW_SUM_TOLERANCE = 1e-9


@dataclass(frozen=True)
class TransitionMatrix:
    """Row-stochastic, upper-triangular epoch matrix with absorbing state k"""

    values: np.ndarray
    epoch: int
    primed: bool = False
    lead: Optional[int] = None

    @property
    def k(self) -> int:
        return self.values.shape[0] - 1

    def row_sums(self) -> np.ndarray:
        return self.values.sum(axis=1)

    def is_stochastic(self, tol: float = ROW_SUM_TOLERANCE) -> bool:
        return bool(
            np.all(self.values >= 0)
            and np.allclose(self.row_sums(), 1.0, atol=tol, rtol=0)
            and np.allclose(np.tril(self.values, -1), 0.0)
        )

    @property
    def label(self) -> str:
        prime = "'" if self.primed else ""
        return f"P{prime}({self.epoch})"


@dataclass(frozen=True)
class ViolationResult:
    probability: float
    k: int
    e_tail_bound: float
    lead_truncation: Optional[int] = None


def close_rows(values: np.ndarray) -> np.ndarray:
    """Put each row's residual mass in column k; row k absorbs"""
    k = values.shape[0] - 1
    residual = 1.0 - values[:k, :k].sum(axis=1)
    if residual.size and residual.min() < -ROW_SUM_TOLERANCE:
        y = int(residual.argmin())
        raise NumericalError(
            f"transition row {y} sums to {1.0 - residual[y]:.12g} before closing",
            bound=float(-residual[y]),
        )
    values[:k, k] = np.clip(residual, 0.0, None)
    values[k, :] = 0.0
    values[k, k] = 1.0
    return values


class MatrixBuilder:
    """Epoch matrices for one parameter set, sharing row profiles across epochs"""

    def __init__(self, params: ProtocolParams, windows: WindowTable):
        self.params = params
        self.k = params.k
        self.windows = windows
        self.geometric = geometric_weights(params.a, params.h, self.k)
        self._profiles: Dict[int, np.ndarray] = {}

    def profile(self, c: int) -> np.ndarray:
        """R_c[d] = sum_{i<=d} g_i P_{W|L}(d-i | c-i) for d < k"""
        cached = self._profiles.get(c)
        if cached is not None:
            return cached
        k = self.k
        out = np.zeros(k)
        for i in range(k):
            if self.geometric[i] == 0:
                break
            out[i:] += self.geometric[i] * self.windows.vector(c - i, k - i)
        self._profiles[c] = out
        return out

    def epoch_matrix(self, j: int) -> TransitionMatrix:
        k = self.k
        if not 1 <= j <= k:
            raise ValueError(f"epoch must lie in 1..{k}, got {j}")
        values = np.zeros((k + 1, k + 1))
        for y in range(k):
            values[y, y:k] = self.profile(j - 1 - y)[: k - y]
        return TransitionMatrix(close_rows(values), epoch=j)

    def first_epoch_matrix(self, lead: int, jumper: bool) -> TransitionMatrix:
        """
        Opening matrix for a general target.

        Jumper target: only row `lead` is populated, from W given L = -lead,
        forming P^(1). Non-jumper target: only row lead+1, shifted by one,
        forming P'^(2).
        """
        k = self.k
        if not 0 <= lead <= k - 1:
            raise ValueError(f"lead must lie in 0..{k - 1}, got {lead}")
        row = lead if jumper else lead + 1
        values = np.zeros((k + 1, k + 1))
        if row < k:
            values[row, row:k] = self.windows.vector(-lead, k - row)
        return TransitionMatrix(
            close_rows(values), epoch=1 if jumper else 2, primed=not jumper, lead=lead
        )

    def product(self, first: int) -> np.ndarray:
        """P^(first) x ... x P^(k); the identity when first > k"""
        out = np.eye(self.k + 1)
        for j in range(first, self.k + 1):
            out = out @ self.epoch_matrix(j).values
        return out


@lru_cache(maxsize=64)
def _builder(params: ProtocolParams, nodes: int) -> MatrixBuilder:
    return MatrixBuilder(params, window_table(params, nodes))


def matrix_builder(
    params: ProtocolParams, config: Optional[SolverConfig] = None
) -> MatrixBuilder:
    config = config or get_default_config()
    return _builder(params, config.quadrature_nodes())


def transition_matrix(
    params: ProtocolParams, j: int, config: Optional[SolverConfig] = None
) -> TransitionMatrix:
    return matrix_builder(params, config).epoch_matrix(j)


def transition_matrices(
    params: ProtocolParams, config: Optional[SolverConfig] = None
) -> List[TransitionMatrix]:
    builder = matrix_builder(params, config)
    return [builder.epoch_matrix(j) for j in range(1, params.k + 1)]


def no_violation_mass(e: RacePmf, distribution: np.ndarray, k: int, start: int = 0) -> float:
    """sum_i e(i) sum_{y=start}^{k-1-i} distribution[y]"""
    total = 0.0
    for i in range(k):
        top = k - 1 - i
        if top < start:
            break
        total += e[i] * float(distribution[start : top + 1].sum())
    return total


def analyze_height1(
    params: ProtocolParams,
    full_matrix: bool = False,
    config: Optional[SolverConfig] = None,
) -> ViolationResult:
    """
    Violation probability of height 1 with its truncation bound.

    Args:
        params: protocol parameters, k included
        full_matrix: form the full matrix product instead of propagating row 0

    Raises:
        OutOfToleranceError: 1/a > 1/h + delta fails
    """
    params.require_tolerance()
    config = config or get_default_config()
    k = params.k
    e = e_pmf(params, k + config.series_extra_terms(), config)
    builder = matrix_builder(params, config)

    if full_matrix:
        distribution = builder.product(1)[0]
    else:
        distribution = np.zeros(k + 1)
        distribution[0] = 1.0
        for j in range(1, k + 1):
            distribution = distribution @ builder.epoch_matrix(j).values

    probability = float(np.clip(1.0 - no_violation_mass(e, distribution, k), 0.0, 1.0))
    logger.debug(
        "height1_probability", k=k, probability=probability, e_tail_bound=e.tail_bound
    )
    return ViolationResult(probability, k, e.tail_bound)


def violation_probability_height1(
    params: ProtocolParams,
    full_matrix: bool = False,
    config: Optional[SolverConfig] = None,
) -> float:
    return analyze_height1(params, full_matrix, config).probability
