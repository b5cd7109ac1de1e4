"""
src/policies/factory.py

Resolve policy names to policy objects: the built-in attacks, bundled decision
tables under `tables/`, or a user CSV file.
"""

from pathlib import Path
from typing import List, Optional, Union

from .bait_and_switch import BaitAndSwitchPolicy
from .base import AttackPolicy, PolicyId
from .private_mining import PrivateMiningPolicy
from .table import DecisionTablePolicy
from .target import TargetBaitAndSwitchPolicy

TABLES_DIR = Path(__file__).parent / "tables"

_BUILTIN = {
    PolicyId.BAIT_AND_SWITCH.value: BaitAndSwitchPolicy,
    PolicyId.PRIVATE_MINING.value: PrivateMiningPolicy,
    PolicyId.TARGET_BAIT_AND_SWITCH.value: TargetBaitAndSwitchPolicy,
}


class PolicyFactory:
    """Factory for attack policies"""

    @staticmethod
    def bundled_tables() -> List[str]:
        if not TABLES_DIR.is_dir():
            return []
        return sorted(path.stem for path in TABLES_DIR.glob("*.csv"))

    @staticmethod
    def available() -> List[str]:
        return list(_BUILTIN) + PolicyFactory.bundled_tables()

    @staticmethod
    def create(
        name: str, table_path: Optional[Union[str, Path]] = None
    ) -> AttackPolicy:
        """
        Build a policy by name.

        Args:
            name: built-in policy, bundled table name, or `custom`
            table_path: CSV decision table, required for `custom`

        Raises:
            ValueError: unknown name or missing table path
        """
        if table_path is not None:
            return DecisionTablePolicy.from_csv(
                table_path, name=None if name == PolicyId.CUSTOM.value else name
            )

        if name in _BUILTIN:
            return _BUILTIN[name]()

        bundled = TABLES_DIR / f"{name}.csv"
        if bundled.is_file():
            return DecisionTablePolicy.from_csv(bundled, name=name)

        if name == PolicyId.CUSTOM.value:
            raise ValueError("custom policy requires a decision table path")
        raise ValueError(
            f"Unknown policy: {name} (available: {', '.join(PolicyFactory.available())})"
        )


def create_policy(
    name: str, table_path: Optional[Union[str, Path]] = None
) -> AttackPolicy:
    return PolicyFactory.create(name, table_path)
