"""
src/mdp/optimality.py

Argmax extraction from value brackets and the zero-delay optimality checks.

An action is a candidate when its upper value reaches the best lower value; a
decision node is undecidable when some candidate cannot be separated from the
best by its lower value. Undecidable nodes are reported, never guessed.
"""

from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Tuple

import structlog

from src.analytic.height1 import violation_probability_height1
from src.core.config import SolverConfig, get_default_config
from src.core.state import ActionKind, Arrival

from .state_space import ARRIVALS, ZeroDelayState
from .value_iteration import Bracket, ValueTable

logger = structlog.get_logger(__name__)


@dataclass(frozen=True)
class ArgmaxSet:
    state: ZeroDelayState
    actions: FrozenSet[ActionKind]
    best: Bracket
    decidable: bool = True

    def __contains__(self, action: ActionKind) -> bool:
        return action in self.actions


def prescribed_action(state: ZeroDelayState) -> ActionKind:
    """Placement the zero-delay optimality results prescribe"""
    m, d, n = state.m, state.d, state.n
    if state.arrival is Arrival.H:
        if d == m < n:
            return ActionKind.lower(m + 1)
        return ActionKind.higher(d + 1)
    if state.arrival is Arrival.A:
        if d <= m:
            return ActionKind.higher(n + 1)
        return ActionKind.lower(m + 1)
    raise ValueError(f"state {state} has no pending arrival")


def rule_label(state: ZeroDelayState) -> str:
    m, d, n = state.m, state.d, state.n
    if state.arrival is Arrival.H:
        return "H: d=m<n" if d == m < n else "H: otherwise"
    return "A: d<=m" if d <= m else "A: d>m"


def argmax_at(table: ValueTable, state: ZeroDelayState, tolerance: float) -> ArgmaxSet:
    options = table.choice_brackets(state)
    best_lo = max(lo for _, lo, _ in options)
    best_hi = max(hi for _, _, hi in options)
    candidates = [(c, lo) for c, lo, hi in options if hi >= best_lo - tolerance]
    decidable = all(lo >= best_lo - tolerance for _, lo in candidates)
    actions = frozenset(a for c, _ in candidates for a in c.actions)
    return ArgmaxSet(state, actions, (best_lo, best_hi), decidable)


def extract_optimal_actions(
    table: ValueTable,
    tolerance: Optional[float] = None,
    config: Optional[SolverConfig] = None,
) -> Dict[ZeroDelayState, ArgmaxSet]:
    """Argmax sets at every decision node of the table"""
    config = config or get_default_config()
    tolerance = tolerance if tolerance is not None else config.mdp_argmax_tolerance()
    space = table.space
    out: Dict[ZeroDelayState, ArgmaxSet] = {}
    for idx in space.transient():
        state = space.states[int(idx)]
        for arrival in ARRIVALS:
            node = state.with_arrival(arrival)
            out[node] = argmax_at(table, node, tolerance)
    undecidable = sum(not s.decidable for s in out.values())
    logger.debug("argmax_extracted", nodes=len(out), undecidable=undecidable)
    return out


@dataclass(frozen=True)
class PropositionCheck:
    state: ZeroDelayState
    prescribed: ActionKind
    argmax: ArgmaxSet
    verdict: str  # "optimal", "violated" or "undecidable"

    @property
    def rule(self) -> str:
        return rule_label(self.state)


@dataclass
class PropositionReport:
    genesis: Bracket
    width: float
    checks: List[PropositionCheck] = field(default_factory=list)

    @property
    def failures(self) -> List[PropositionCheck]:
        return [c for c in self.checks if c.verdict == "violated"]

    @property
    def undecidable(self) -> List[PropositionCheck]:
        return [c for c in self.checks if c.verdict == "undecidable"]

    @property
    def passed(self) -> bool:
        return not self.failures

    def by_rule(self) -> Dict[str, Counter]:
        summary: Dict[str, Counter] = {}
        for check in self.checks:
            summary.setdefault(check.rule, Counter())[check.verdict] += 1
        return summary


def verify_propositions(
    table: ValueTable,
    tolerance: Optional[float] = None,
    config: Optional[SolverConfig] = None,
) -> PropositionReport:
    """Check the prescribed placement against the argmax at every decision node"""
    config = config or get_default_config()
    tolerance = tolerance if tolerance is not None else config.mdp_argmax_tolerance()
    report = PropositionReport(table.genesis, table.width())
    for node, argmax in extract_optimal_actions(table, tolerance, config).items():
        action = prescribed_action(node)
        hit = action in argmax
        if argmax.decidable:
            verdict = "optimal" if hit else "violated"
        else:
            verdict = "undecidable" if hit else "violated"
        report.checks.append(PropositionCheck(node, action, argmax, verdict))

    logger.info(
        "propositions_verified",
        nodes=len(report.checks),
        failures=len(report.failures),
        undecidable=len(report.undecidable),
    )
    return report


def analytic_agreement(
    table: ValueTable, tolerance: float = 1e-9, config: Optional[SolverConfig] = None
) -> Tuple[float, bool]:
    """Analytic zero-delay probability and whether it falls in the genesis bracket"""
    value = violation_probability_height1(table.params, config=config)
    lo, hi = table.genesis
    return value, lo - tolerance <= value <= hi + tolerance


def monotonicity_violations(
    table: ValueTable, tolerance: float = 1e-9
) -> List[Tuple[ZeroDelayState, ZeroDelayState]]:
    """
    Pairs (worse, better) where the table contradicts V rising in m and n and
    falling in d; a pair is flagged only when the better state's upper value
    stays below the worse state's lower value.
    """
    top = table.k + 1
    out = []
    for n in range(top):
        for m in range(n + 1):
            for d in range(n + 1):
                base = ZeroDelayState(m, d, n)
                better = [ZeroDelayState(m, d, n + 1)]
                if m + 1 <= n:
                    better.append(ZeroDelayState(m + 1, d, n))
                if d >= 1:
                    better.append(ZeroDelayState(m, d - 1, n))
                lo = table.bracket(base)[0]
                for other in better:
                    if table.bracket(other)[1] < lo - tolerance:
                        out.append((base, other))
    return out
