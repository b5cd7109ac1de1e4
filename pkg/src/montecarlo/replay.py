"""
src/montecarlo/replay.py

Cross-check of the compact state against the full block tree: identical arrival
streams drive both models under the same policy, and the violation verdicts must
agree after every arrival. The first divergent stream is written as a trace.
"""

from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

import structlog

from src.core.errors import NakamotoError
from src.core.params import ProtocolParams
from src.core.state import Arrival, CompactState
from src.core.trace import write_trace
from src.core.transitions import advance_time
from src.core.tree import BlockTree
from src.policies.base import AttackPolicy

from .rng import Stream, stream

logger = structlog.get_logger(__name__)

MAX_HORIZON = 200


@dataclass
class StreamOutcome:
    violated: bool
    diverged_at: Optional[int] = None
    reason: str = ""
    tree: Optional[BlockTree] = None


@dataclass
class TreeCheckReport:
    streams: int
    horizon: int
    violations: int = 0
    divergences: int = 0
    first_divergence: Optional[int] = None
    reason: str = ""
    trace_path: Optional[Path] = None

    @property
    def passed(self) -> bool:
        return self.divergences == 0


def replay_stream(
    params: ProtocolParams, policy: AttackPolicy, seed: int, index: int, horizon: int
) -> StreamOutcome:
    rng = stream(seed, Stream.TREE, index)
    k, delta = params.k, params.delta
    scale = 1.0 / params.lambda_
    tree = BlockTree(delta, capacity=horizon + 1)
    state = CompactState.genesis()

    for step in range(horizon):
        elapsed = rng.exponential(scale)
        arrival = Arrival.A if rng.random() < params.beta else Arrival.H
        state = advance_time(state, elapsed)
        tree.advance(elapsed)
        pending = state.with_arrival(arrival)
        try:
            action = policy.action(pending)
            tree.add_block(arrival, tree.parent_for(action))
            state = policy.play(pending, delta)
        except NakamotoError as e:
            return StreamOutcome(False, step, f"{type(e).__name__}: {e}", tree)

        compact_verdict = state.is_violation(k)
        if compact_verdict != tree.is_violation(k):
            return StreamOutcome(
                compact_verdict,
                step,
                f"compact {compact_verdict} vs tree {not compact_verdict} at {state}",
                tree,
            )
        if delta == 0 and state.public_height() != state.d:
            return StreamOutcome(
                compact_verdict, step, f"public height differs from d at {state}", tree
            )
        if compact_verdict:
            return StreamOutcome(True)
    return StreamOutcome(False)


def tree_vs_compact_check(
    params: ProtocolParams,
    policy: AttackPolicy,
    streams: int,
    horizon: int = MAX_HORIZON,
    seed: int = 0,
    trace_dir: Optional[Union[str, Path]] = None,
) -> TreeCheckReport:
    """
    Replay `streams` arrival streams of at most `horizon` blocks through both models.

    Args:
        trace_dir: where the first divergent stream is written as a trace file
    """
    if not 1 <= horizon <= MAX_HORIZON:
        raise ValueError(f"horizon must lie in 1..{MAX_HORIZON}, got {horizon}")
    report = TreeCheckReport(streams, horizon)
    for index in range(streams):
        outcome = replay_stream(params, policy, seed, index, horizon)
        report.violations += outcome.violated
        if outcome.diverged_at is None:
            continue
        report.divergences += 1
        if report.first_divergence is None:
            report.first_divergence = index
            report.reason = outcome.reason
            logger.warning(
                "tree_compact_divergence",
                stream=index,
                step=outcome.diverged_at,
                reason=outcome.reason,
            )
            if trace_dir is not None and outcome.tree is not None:
                path = Path(trace_dir) / f"divergence-seed{seed}-stream{index}.trace"
                path.parent.mkdir(parents=True, exist_ok=True)
                report.trace_path = write_trace(path, outcome.tree.to_trace())

    logger.info(
        "tree_compact_check",
        streams=streams,
        violations=report.violations,
        divergences=report.divergences,
    )
    return report
