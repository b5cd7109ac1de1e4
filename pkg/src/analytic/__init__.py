"""
src/analytic

Exact engines: race pmf, window increments, epoch matrices and the violation
probabilities for height 1 and for a general target.
"""

from .height1 import (
    MatrixBuilder,
    TransitionMatrix,
    ViolationResult,
    analyze_height1,
    matrix_builder,
    transition_matrices,
    transition_matrix,
    violation_probability_height1,
)
from .kernels import erlang_pdf, gauss_legendre, geometric_weights, poisson_pmf
from .race import PostJumperLeadPmf, RacePmf, e_pmf, m_tail, race_tail_ratio
from .series import TruncatedSeries
from .target import (
    AgeDensity,
    LeadJointPmf,
    age_density,
    analyze_target,
    first_epoch_matrices,
    lead_after_jumper_pmf,
    lead_joint_pmf,
    violation_probability_target,
)
from .tradeoff import analyze, required_depth, tradeoff_curve
from .window import WindowTable, p_w_given_l, window_increment_pmf, window_table

__all__ = [
    "MatrixBuilder",
    "TransitionMatrix",
    "ViolationResult",
    "analyze_height1",
    "matrix_builder",
    "transition_matrices",
    "transition_matrix",
    "violation_probability_height1",
    "erlang_pdf",
    "gauss_legendre",
    "geometric_weights",
    "poisson_pmf",
    "PostJumperLeadPmf",
    "RacePmf",
    "e_pmf",
    "m_tail",
    "race_tail_ratio",
    "TruncatedSeries",
    "AgeDensity",
    "LeadJointPmf",
    "age_density",
    "analyze_target",
    "first_epoch_matrices",
    "lead_after_jumper_pmf",
    "lead_joint_pmf",
    "violation_probability_target",
    "analyze",
    "required_depth",
    "tradeoff_curve",
    "WindowTable",
    "p_w_given_l",
    "window_increment_pmf",
    "window_table",
]
