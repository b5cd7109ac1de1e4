"""
src/policies/base.py

Policy interface: a policy maps a compact state with a pending arrival to the
placement of the new block.
"""

from abc import ABC, abstractmethod
from enum import Enum
from typing import Optional

import structlog

from src.core.errors import InadmissibleActionError, PolicyError
from src.core.state import ActionKind, CompactState
from src.core.transitions import apply_action

logger = structlog.get_logger(__name__)


class PolicyId(str, Enum):
    BAIT_AND_SWITCH = "bait-and-switch"
    PRIVATE_MINING = "private-mining"
    TARGET_BAIT_AND_SWITCH = "target-bait-and-switch"
    CUSTOM = "custom"


class AttackPolicy(ABC):
    """Adversarial placement rule over the compact state"""

    policy_id: PolicyId = PolicyId.CUSTOM

    def __init__(self, name: Optional[str] = None):
        self.name = name or self.policy_id.value

    @abstractmethod
    def action(self, state: CompactState) -> ActionKind:
        """Return the placement for `state.arrival`"""
        pass

    def __call__(self, state: CompactState) -> ActionKind:
        return self.action(state)

    def play(
        self, state: CompactState, delta: float, k: Optional[int] = None
    ) -> CompactState:
        """
        Ask the policy and apply its action.

        Raises:
            PolicyError: the policy has no rule or picked an inadmissible action
        """
        action = self.action(state)
        try:
            return apply_action(state, action, delta, k)
        except InadmissibleActionError as e:
            logger.error(
                "policy_inadmissible_action",
                policy=self.name,
                state=str(state),
                action=str(action),
                condition=e.condition,
            )
            raise PolicyError(
                f"policy '{self.name}' chose {action}: {e.condition}", state
            ) from e

    def __repr__(self) -> str:
        return f"{type(self).__name__}(name={self.name!r})"
