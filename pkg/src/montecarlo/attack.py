"""
src/montecarlo/attack.py

Continuous-time simulation of an attack on the compact state.

Blocks arrive as a Poisson process of rate lambda and are adversarial with
probability beta. A run ends in a violation, or in a no-violation verdict once
the lower branch trails max(k, public height) by the deficit cutoff B.
"""

from typing import Dict, Optional, Tuple

import numpy as np
import structlog

from src.core.config import SolverConfig, get_default_config
from src.core.params import ProtocolParams
from src.core.state import Arrival, CompactState
from src.core.transitions import advance_time
from src.models import EstimateWithCI, RunConfig, Target
from src.policies.base import AttackPolicy
from src.policies.factory import create_policy

from .estimators import termination_bias_bound
from .rng import run_generator
from .runner import chunks, run_chunks

logger = structlog.get_logger(__name__)


def params_record(params: ProtocolParams) -> Dict[str, float]:
    return {
        "a": params.a,
        "h": params.h,
        "lambda": params.lambda_,
        "beta": params.beta,
        "delta": params.delta,
        "k": params.k,
    }


def run_attack(
    params: ProtocolParams,
    policy: AttackPolicy,
    rng: np.random.Generator,
    cutoff: int,
    state: Optional[CompactState] = None,
) -> bool:
    """
    One attack run; True on a violation.

    Raises:
        PolicyError: the policy picked an inadmissible action
    """
    k, delta = params.k, params.delta
    scale = 1.0 / params.lambda_
    beta = params.beta
    state = state if state is not None else CompactState.genesis()
    while True:
        if state.is_violation(k):
            return True
        if max(k, state.public_height()) - state.m >= cutoff:
            return False
        state = advance_time(state, rng.exponential(scale))
        arrival = Arrival.A if rng.random() < beta else Arrival.H
        state = policy.play(state.with_arrival(arrival), delta)


def _attack_chunk(config: RunConfig, cutoff: int, start: int, end: int) -> int:
    policy = create_policy(config.policy, config.table_path)
    hits = 0
    for run in range(start, end):
        hits += run_attack(config.params, policy, run_generator(config.seed, run), cutoff)
    return hits


def resolve_cutoff(config: RunConfig, solver: SolverConfig) -> Tuple[int, float]:
    cutoff = config.cutoff(solver.mc_deficit_offset())
    return cutoff, termination_bias_bound(config.params, cutoff, solver)


def simulate_violation(
    config: RunConfig, solver: Optional[SolverConfig] = None
) -> EstimateWithCI:
    """
    Estimate the violation probability of height 1 under `config.policy`.

    Raises:
        OutOfToleranceError: the cutoff bias bound needs 1/a > 1/h + delta
        PolicyError: a run hit an inadmissible action
    """
    solver = solver or get_default_config()
    params = config.params
    params.require_tolerance()
    cutoff, bias = resolve_cutoff(config, solver)
    policy = create_policy(config.policy, config.table_path)

    jobs = [
        (config, cutoff, start, end)
        for _, start, end in chunks(config.runs, config.batch_size)
    ]
    hits = sum(run_chunks(_attack_chunk, jobs, config.workers))

    estimate = EstimateWithCI.from_hits(
        hits,
        config.runs,
        seed=config.seed,
        bias_bound=bias,
        policy=policy.name,
        params=params_record(params),
        target=Target.HEIGHT1,
    )
    logger.info(
        "simulation_finished",
        policy=policy.name,
        runs=config.runs,
        estimate=estimate.estimate,
        stderr=estimate.stderr,
        cutoff=cutoff,
        bias_bound=bias,
    )
    return estimate
