"""
src/policies

Adversarial policies over the compact state.
"""

from .bait_and_switch import BaitAndSwitchPolicy, bait_and_switch_action
from .base import AttackPolicy, PolicyId
from .factory import PolicyFactory, create_policy
from .private_mining import PrivateMiningPolicy, honest_branch, private_mining_action
from .table import DecisionRule, DecisionTablePolicy, load_decision_table
from .target import (
    TargetBaitAndSwitchPolicy,
    TargetContext,
    place_target,
    target_bait_and_switch_action,
)

__all__ = [
    "AttackPolicy",
    "PolicyId",
    "BaitAndSwitchPolicy",
    "bait_and_switch_action",
    "PrivateMiningPolicy",
    "private_mining_action",
    "honest_branch",
    "TargetBaitAndSwitchPolicy",
    "TargetContext",
    "target_bait_and_switch_action",
    "place_target",
    "DecisionRule",
    "DecisionTablePolicy",
    "load_decision_table",
    "PolicyFactory",
    "create_policy",
]
