"""
src/montecarlo

Statistical oracles: attack simulation for height 1 and general targets, race
and window estimators, and the block-tree replay check.
"""

from .attack import params_record, run_attack, simulate_violation
from .estimators import EmpiricalPmf, termination_bias_bound
from .race import (
    estimate_m_pmf,
    estimate_w_given_l,
    sample_race_supremum,
    sample_window_increment,
)
from .replay import TreeCheckReport, replay_stream, tree_vs_compact_check
from .rng import Stream, batch_generator, run_generator, stream
from .runner import chunks, run_chunks
from .target import simulate_target_violation, warm_up

__all__ = [
    "params_record",
    "run_attack",
    "simulate_violation",
    "EmpiricalPmf",
    "termination_bias_bound",
    "estimate_m_pmf",
    "estimate_w_given_l",
    "sample_race_supremum",
    "sample_window_increment",
    "TreeCheckReport",
    "replay_stream",
    "tree_vs_compact_check",
    "Stream",
    "batch_generator",
    "run_generator",
    "stream",
    "chunks",
    "run_chunks",
    "simulate_target_violation",
    "warm_up",
]
