"""
src/montecarlo/race.py

Sampling estimators for the race supremum M and the window increment W given L.
"""

from typing import Optional

import numpy as np
import structlog

from src.core.config import SolverConfig, get_default_config
from src.core.params import ProtocolParams

from .estimators import EmpiricalPmf
from .rng import Stream, stream

logger = structlog.get_logger(__name__)


def sample_race_supremum(
    params: ProtocolParams, rng: np.random.Generator, runs: int, cutoff: int
) -> np.ndarray:
    """
    sup_t (A_t - J_t) with J the jumper renewal process started at a jumper.

    The supremum is reached just before a jumper; a run stops once it trails its
    running maximum by `cutoff`.
    """
    a, h, delta = params.a, params.h, params.delta
    current = rng.poisson(a * (delta + rng.exponential(1.0 / h, runs)))
    best = current.copy()
    active = np.ones(runs, dtype=bool)
    while active.any():
        idx = np.flatnonzero(active)
        gap = delta + rng.exponential(1.0 / h, idx.size)
        current[idx] += rng.poisson(a * gap) - 1
        best[idx] = np.maximum(best[idx], current[idx])
        active[idx] = best[idx] - current[idx] < cutoff
    return best


def estimate_m_pmf(
    params: ProtocolParams,
    runs: int,
    cutoff: Optional[int] = None,
    seed: int = 0,
    config: Optional[SolverConfig] = None,
) -> EmpiricalPmf:
    config = config or get_default_config()
    cutoff = cutoff if cutoff is not None else config.mc_deficit_offset()
    samples = sample_race_supremum(params, stream(seed, Stream.RACE), runs, cutoff)
    logger.debug("race_supremum_sampled", runs=runs, cutoff=cutoff, mean=float(samples.mean()))
    return EmpiricalPmf.from_samples(samples, seed)


def sample_window_increment(
    params: ProtocolParams, l: int, rng: np.random.Generator, runs: int
) -> np.ndarray:
    """
    Height gained by the adversarial branch in one delta-window given lead l.

    With fewer than l A-blocks in the window the gain is their count. Otherwise,
    after the l-th A-block the first block of either kind adds one more height
    and later A-blocks extend it.
    """
    a, lam, delta = params.a, params.lambda_, params.delta
    if l < 0:
        return rng.poisson(a * delta, runs)

    reached = np.zeros(runs)
    gain = np.zeros(runs, dtype=np.int64)
    if l > 0:
        if a == 0:
            return gain
        arrivals = np.cumsum(rng.exponential(1.0 / a, (runs, l)), axis=1)
        inside = (arrivals <= delta).sum(axis=1)
        short = inside < l
        gain[short] = inside[short]
        reached = arrivals[:, l - 1]
    else:
        short = np.zeros(runs, dtype=bool)

    first = reached + rng.exponential(1.0 / lam, runs)
    quiet = ~short & (first > delta)
    busy = ~short & ~quiet
    gain[quiet] = l
    gain[busy] = l + 1 + rng.poisson(a * (delta - first[busy]))
    return gain


def estimate_w_given_l(
    params: ProtocolParams, l: int, runs: int, seed: int = 0
) -> EmpiricalPmf:
    # one stream per lead, so estimates for different l are independent
    rng = stream(seed, Stream.WINDOW, l + 1 if l >= 0 else 0)
    samples = sample_window_increment(params, l, rng, runs)
    return EmpiricalPmf.from_samples(samples, seed)
