"""
src/montecarlo/target.py

Monte Carlo estimate for a general target block.

The target is the first H-block after an arbitrary time in steady state. Its
lead is drawn looking backwards: the age of the last jumper comes from the
stationary age law of the jumper renewal (gaps delta + exponential(h)), and the
lead is the running maximum of A-blocks minus jumpers over the last `jumpers`
gaps. The lead and the jumper status fix the start state, from which
bait-and-switch is simulated run by run.
"""

from typing import Optional, Tuple

import numpy as np
import structlog

from src.core.config import SolverConfig, get_default_config
from src.core.params import ProtocolParams
from src.models import EstimateWithCI, RunConfig, Target
from src.policies.factory import create_policy
from src.policies.target import place_target

from .attack import params_record, resolve_cutoff, run_attack
from .rng import batch_generator, run_generator
from .runner import chunks, run_chunks

logger = structlog.get_logger(__name__)


def warm_up(
    params: ProtocolParams, rng: np.random.Generator, size: int, jumpers: int
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Lead just before the target (jumper) or before the next jumper (otherwise),
    and whether each target is a jumper.

    Every step draws full-size arrays, so a longer look-back reuses the draws of
    a shorter one and only differs where the maximum lies further back.
    """
    a, h, delta = params.a, params.h, params.delta
    mean_gap = delta + 1.0 / h

    # age of the last jumper at an arbitrary time
    in_window = rng.random(size) < delta / mean_gap
    age = np.where(
        in_window, rng.uniform(0.0, delta, size), delta + rng.exponential(1.0 / h, size)
    )
    wait = rng.exponential(1.0 / h, size)
    jumper = age + wait > delta

    # a non-jumper target counts A-blocks up to the next jumper
    span = np.where(jumper, age + wait, delta + rng.exponential(1.0 / h, size))
    current = rng.poisson(a * span)
    lead = current.copy()
    for _ in range(jumpers):
        gap = delta + rng.exponential(1.0 / h, size)
        current += rng.poisson(a * gap) - 1
        np.maximum(lead, current, out=lead)
    return lead, jumper


def _target_chunk(
    config: RunConfig, cutoff: int, jumpers: int, batch: int, start: int, end: int
) -> Tuple[int, int]:
    params = config.params
    policy = create_policy(config.policy, config.table_path)
    leads, is_jumper = warm_up(params, batch_generator(config.seed, batch), end - start, jumpers)
    hits = 0
    for offset, run in enumerate(range(start, end)):
        jumper = bool(is_jumper[offset])
        state = place_target(int(leads[offset]), jumper, jumper, params.delta)
        hits += run_attack(params, policy, run_generator(config.seed, run), cutoff, state)
    return hits, int(is_jumper.sum())


def simulate_target_violation(
    config: RunConfig, solver: Optional[SolverConfig] = None
) -> EstimateWithCI:
    """
    Estimate the violation probability of a general target block.

    The result also carries the fraction of targets that were jumpers.
    """
    solver = solver or get_default_config()
    params = config.params
    params.require_tolerance()
    cutoff, bias = resolve_cutoff(config, solver)
    policy = create_policy(config.policy, config.table_path)

    jobs = [
        (config, cutoff, config.warmup_jumpers, batch, start, end)
        for batch, start, end in chunks(config.runs, config.batch_size)
    ]
    results = run_chunks(_target_chunk, jobs, config.workers)
    hits = sum(r[0] for r in results)
    jumpers = sum(r[1] for r in results)

    estimate = EstimateWithCI.from_hits(
        hits,
        config.runs,
        seed=config.seed,
        bias_bound=bias,
        policy=policy.name,
        params=params_record(params),
        target=Target.GENERAL,
        jumper_fraction=jumpers / config.runs,
    )
    logger.info(
        "target_simulation_finished",
        runs=config.runs,
        estimate=estimate.estimate,
        stderr=estimate.stderr,
        jumper_fraction=estimate.jumper_fraction,
        warmup_jumpers=config.warmup_jumpers,
    )
    return estimate
