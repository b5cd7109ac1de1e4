"""
src/policies/private_mining.py

Private mining: A-blocks extend a hidden all-adversarial chain, H-blocks are
delayed maximally and attach at the lowest admissible height of the honest
branch.
"""

from src.core.errors import PolicyError
from src.core.state import ZERO_TOLERANCE, ActionKind, Arrival, Branch, CompactState

from .base import AttackPolicy, PolicyId


def honest_branch(state: CompactState) -> Branch:
    """
    Branch holding the honest chain.

    Honest blocks carry finite timers, so the honest chain reaches height d.
    It is the higher branch when it is tied for the top or exceeds m.
    """
    if state.d == state.n or state.d > state.m:
        return Branch.HIGHER
    return Branch.LOWER


def private_mining_action(state: CompactState) -> ActionKind:
    honest = honest_branch(state)

    if state.arrival is Arrival.A:
        if honest is Branch.HIGHER:
            return ActionKind.lower(state.m + 1)
        return ActionKind.higher(state.n + 1)

    if state.arrival is not Arrival.H:
        raise PolicyError("no pending arrival", state)

    height = state.d if state.timer_at(state.d) > ZERO_TOLERANCE else state.d + 1
    return ActionKind(honest, height)


class PrivateMiningPolicy(AttackPolicy):
    policy_id = PolicyId.PRIVATE_MINING

    def action(self, state: CompactState) -> ActionKind:
        return private_mining_action(state)
