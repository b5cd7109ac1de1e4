"""
src/mdp

Zero-delay exact dynamic programming: value brackets, argmax extraction and
optimality checks of the prescribed placements.
"""

from .optimality import (
    ArgmaxSet,
    PropositionCheck,
    PropositionReport,
    analytic_agreement,
    extract_optimal_actions,
    monotonicity_violations,
    prescribed_action,
    verify_propositions,
)
from .state_space import ZeroDelayState, ZeroDelayStateSpace
from .value_iteration import (
    ValueTable,
    evaluate_policy,
    finite_horizon_bracket,
    policy_value_zero_delay,
    value_iteration_zero_delay,
)

__all__ = [
    "ArgmaxSet",
    "PropositionCheck",
    "PropositionReport",
    "analytic_agreement",
    "extract_optimal_actions",
    "monotonicity_violations",
    "prescribed_action",
    "verify_propositions",
    "ZeroDelayState",
    "ZeroDelayStateSpace",
    "ValueTable",
    "evaluate_policy",
    "finite_horizon_bracket",
    "policy_value_zero_delay",
    "value_iteration_zero_delay",
]
