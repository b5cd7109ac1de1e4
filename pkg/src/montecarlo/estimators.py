"""
src/montecarlo/estimators.py

Histogram estimators and the termination-bias bound of truncated runs.
"""

from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from src.analytic.race import race_tail_ratio
from src.core.config import SolverConfig
from src.core.params import ProtocolParams


@dataclass(frozen=True)
class EmpiricalPmf:
    """Counts of a non-negative integer sample; the last bin is exact, not a tail"""

    counts: np.ndarray
    runs: int
    seed: int = 0

    @classmethod
    def from_samples(cls, samples: np.ndarray, seed: int = 0) -> "EmpiricalPmf":
        samples = np.asarray(samples, dtype=int)
        if samples.size == 0:
            raise ValueError("no samples")
        if samples.min() < 0:
            raise ValueError("samples must be non-negative")
        return cls(np.bincount(samples), int(samples.size), seed)

    @property
    def pmf(self) -> np.ndarray:
        return self.counts / self.runs

    @property
    def stderr(self) -> np.ndarray:
        p = self.pmf
        return np.sqrt(p * (1.0 - p) / self.runs)

    def total(self) -> float:
        return float(self.pmf.sum())

    def __getitem__(self, i: int) -> float:
        return float(self.pmf[i]) if 0 <= i < len(self.counts) else 0.0

    def disagreements(
        self, expected: np.ndarray, z: float = 3.0, min_expected: float = 100.0
    ) -> List[int]:
        """
        Bins whose estimate is more than z standard errors from `expected`.

        Only bins with at least `min_expected` expected counts are compared; the
        standard error uses the expected probability.
        """
        expected = np.asarray(expected, dtype=float)
        observed = np.zeros(len(expected))
        upto = min(len(expected), len(self.counts))
        observed[:upto] = self.pmf[:upto]
        sigma = np.sqrt(expected * (1.0 - expected) / self.runs)
        checked = expected * self.runs >= min_expected
        bad = checked & (np.abs(observed - expected) > z * sigma)
        return [int(i) for i in np.flatnonzero(bad)]


def termination_bias_bound(
    params: ProtocolParams, cutoff: int, config: Optional[SolverConfig] = None
) -> float:
    """rho^(B - k): the mass a run stopped at deficit B could still lose"""
    if params.a == 0:
        return 0.0
    rho = race_tail_ratio(params, config=config)
    return float(rho ** max(cutoff - params.k, 0))
