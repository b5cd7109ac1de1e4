"""
src/policies/target.py

Bait-and-switch attack on a general target block and the placement of the
target in the compact state.

Once the target is placed, the state is normalized so that the block below the
target (or below the highest jumper) sits at height 0, and the height-1 decision
table applies unchanged; the attack is invariant under a uniform height shift.
"""

from dataclasses import dataclass
from typing import Optional

from src.core.state import ActionKind, CompactState

from .bait_and_switch import bait_and_switch_action
from .base import AttackPolicy, PolicyId


@dataclass(frozen=True)
class TargetContext:
    """Height offset eta between absolute heights and the normalized state"""

    eta: int = 0


def target_bait_and_switch_action(
    state: CompactState, context: TargetContext = TargetContext()
) -> ActionKind:
    if context.eta == 0:
        return bait_and_switch_action(state)
    normalized = state.shifted(-context.eta)
    return bait_and_switch_action(normalized).shifted(context.eta)


def place_target(
    lead: int, highest_jumper_public: bool, target_is_jumper: bool, delta: float
) -> CompactState:
    """
    Start state right after the target block arrives.

    Args:
        lead: pre-mining lead just before the target (jumper) or just before the
            next jumper (non-jumper target)
        highest_jumper_public: whether the highest jumper is already public. A
            public jumper pushes the target one height above it, which makes the
            target a jumper itself.
        target_is_jumper: whether the target is the first H-block at its height
        delta: delay bound

    Returns:
        The normalized start state with no pending arrival

    Raises:
        ValueError: negative lead, or a non-jumper target above a public jumper
    """
    if lead < 0:
        raise ValueError(f"lead must be non-negative, got {lead}")
    if highest_jumper_public and not target_is_jumper:
        raise ValueError("a target placed above a public jumper is itself a jumper")

    if target_is_jumper:
        if lead == 0:
            return CompactState(0, 1, 1, (0.0, delta))
        return CompactState(1, 1, lead, (delta,))

    if lead == 0:
        return CompactState(1, 2, 2, (0.0, delta))
    return CompactState(2, 2, 1 + lead, (delta,))


class TargetBaitAndSwitchPolicy(AttackPolicy):
    policy_id = PolicyId.TARGET_BAIT_AND_SWITCH

    def __init__(
        self, context: TargetContext = TargetContext(), name: Optional[str] = None
    ):
        super().__init__(name)
        self.context = context

    def action(self, state: CompactState) -> ActionKind:
        return target_bait_and_switch_action(state, self.context)
