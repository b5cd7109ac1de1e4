"""
src/policies/table.py

Decision-table policies loaded from CSV.

Columns: class,arrival,ld_zero,m_eq_n,d_le_m,branch,height_expr. A `*` matches
anything. Rows are tried in file order and the first match wins.
"""

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Union

import structlog

from src.core.errors import PolicyError
from src.core.state import (
    ZERO_TOLERANCE,
    ActionKind,
    Arrival,
    Branch,
    CompactState,
    StateClass,
)

from .base import AttackPolicy, PolicyId

logger = structlog.get_logger(__name__)

COLUMNS = ("class", "arrival", "ld_zero", "m_eq_n", "d_le_m", "branch", "height_expr")
HEIGHT_EXPRESSIONS = ("d", "d+1", "m+1", "n+1")
WILDCARD = "*"

_BOOLEANS = {"true": True, "1": True, "yes": True, "false": False, "0": False, "no": False}


@dataclass(frozen=True)
class DecisionRule:
    state_class: Optional[StateClass]
    arrival: Optional[Arrival]
    ld_zero: Optional[bool]
    m_eq_n: Optional[bool]
    d_le_m: Optional[bool]
    branch: Branch
    height_expr: str

    def matches(self, state: CompactState) -> bool:
        checks = (
            (self.state_class, state.classify()),
            (self.arrival, state.arrival),
            (self.ld_zero, state.timer_at(state.d) <= ZERO_TOLERANCE),
            (self.m_eq_n, state.m == state.n),
            (self.d_le_m, state.d <= state.m),
        )
        return all(wanted is None or wanted == actual for wanted, actual in checks)

    def resolve(self, state: CompactState) -> ActionKind:
        heights = {
            "d": state.d,
            "d+1": state.d + 1,
            "m+1": state.m + 1,
            "n+1": state.n + 1,
        }
        return ActionKind(self.branch, heights[self.height_expr])


def _parse_flag(value: str, column: str, lineno: int) -> Optional[bool]:
    value = value.strip().lower()
    if value == WILDCARD:
        return None
    if value not in _BOOLEANS:
        raise PolicyError(f"row {lineno}: column {column} must be true/false/*, got '{value}'")
    return _BOOLEANS[value]


def _parse_rule(row: Dict[str, str], lineno: int) -> DecisionRule:
    try:
        state_class = row["class"].strip().lower()
        arrival = row["arrival"].strip().upper()
        height_expr = row["height_expr"].strip().replace(" ", "")
        if height_expr not in HEIGHT_EXPRESSIONS:
            raise ValueError(f"height_expr must be one of {HEIGHT_EXPRESSIONS}")
        return DecisionRule(
            state_class=None if state_class == WILDCARD else StateClass(state_class),
            arrival=None if arrival == WILDCARD else Arrival(arrival),
            ld_zero=_parse_flag(row["ld_zero"], "ld_zero", lineno),
            m_eq_n=_parse_flag(row["m_eq_n"], "m_eq_n", lineno),
            d_le_m=_parse_flag(row["d_le_m"], "d_le_m", lineno),
            branch=Branch(row["branch"].strip().lower()),
            height_expr=height_expr,
        )
    except (KeyError, ValueError, AttributeError) as e:
        raise PolicyError(f"row {lineno}: {e}") from e


def load_decision_table(path: Union[str, Path]) -> List[DecisionRule]:
    path = Path(path)
    with open(path, "r", encoding="utf-8", newline="") as f:
        reader = csv.DictReader(
            (line for line in f if line.strip() and not line.lstrip().startswith("#"))
        )
        missing = [c for c in COLUMNS if c not in (reader.fieldnames or [])]
        if missing:
            raise PolicyError(f"{path}: missing columns {', '.join(missing)}")
        rules = [_parse_rule(row, lineno) for lineno, row in enumerate(reader, start=2)]
    logger.debug("decision_table_loaded", path=str(path), rules=len(rules))
    return rules


class DecisionTablePolicy(AttackPolicy):
    """User heuristic given as an ordered list of rules"""

    policy_id = PolicyId.CUSTOM

    def __init__(self, rules: List[DecisionRule], name: str = "custom"):
        super().__init__(name)
        if not rules:
            raise PolicyError(f"decision table '{name}' has no rules")
        self.rules = rules

    @classmethod
    def from_csv(cls, path: Union[str, Path], name: Optional[str] = None) -> "DecisionTablePolicy":
        path = Path(path)
        return cls(load_decision_table(path), name=name or path.stem)

    def action(self, state: CompactState) -> ActionKind:
        for rule in self.rules:
            if rule.matches(state):
                return rule.resolve(state)
        raise PolicyError(f"decision table '{self.name}' has no rule", state)
