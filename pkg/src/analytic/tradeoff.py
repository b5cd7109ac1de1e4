"""
src/analytic/tradeoff.py

Latency-security trade-off: violation probability against confirmation depth.
"""

from typing import List, Optional

import structlog

from src.core.config import SolverConfig
from src.core.params import ProtocolParams
from src.models import Target, TradeoffRow

from .height1 import ViolationResult, analyze_height1
from .target import analyze_target

logger = structlog.get_logger(__name__)


def analyze(
    params: ProtocolParams,
    target: Target = Target.HEIGHT1,
    config: Optional[SolverConfig] = None,
) -> ViolationResult:
    if Target(target) is Target.GENERAL:
        return analyze_target(params, config)
    return analyze_height1(params, config=config)


def tradeoff_curve(
    params: ProtocolParams,
    k_max: int,
    target: Target = Target.HEIGHT1,
    config: Optional[SolverConfig] = None,
) -> List[TradeoffRow]:
    """One row per depth k = 1 .. k_max; the k carried by params is ignored"""
    if k_max < 1:
        raise ValueError(f"k_max must be at least 1, got {k_max}")
    params.require_tolerance()
    rows = []
    for k in range(1, k_max + 1):
        result = analyze(params.with_depth(k), target, config)
        rows.append(
            TradeoffRow(
                k=k,
                probability=result.probability,
                e_tail_bound=result.e_tail_bound,
                lead_truncation=result.lead_truncation,
                latency_seconds=k / params.lambda_,
            )
        )
    logger.info("tradeoff_curve", k_max=k_max, target=Target(target).value)
    return rows


def required_depth(
    params: ProtocolParams,
    epsilon: float,
    k_max: int,
    target: Target = Target.HEIGHT1,
    config: Optional[SolverConfig] = None,
) -> Optional[int]:
    """Smallest k <= k_max whose violation probability is at most epsilon"""
    if not 0.0 < epsilon < 1.0:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")
    params.require_tolerance()
    for k in range(1, k_max + 1):
        if analyze(params.with_depth(k), target, config).probability <= epsilon:
            return k
    return None
