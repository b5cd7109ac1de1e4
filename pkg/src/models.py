from pydantic import BaseModel, Field, model_validator
from typing import Dict, List, Optional
from datetime import datetime
from enum import Enum
import math

from src.core.params import ProtocolParams


class Target(str, Enum):
    HEIGHT1 = "height1"
    GENERAL = "general"


class TradeoffRow(BaseModel):
    k: int = Field(ge=1)
    probability: float = Field(ge=0.0, le=1.0)
    e_tail_bound: float = Field(ge=0.0)
    lead_truncation: Optional[int] = None
    latency_seconds: float = Field(ge=0.0)


class EstimateWithCI(BaseModel):
    """Monte Carlo estimate of a violation probability"""

    estimate: float = Field(ge=0.0, le=1.0)
    stderr: float = Field(ge=0.0)
    runs: int = Field(ge=1)
    seed: int
    bias_bound: float = Field(ge=0.0)
    policy: str
    params: Dict[str, float] = Field(default_factory=dict)
    target: Target = Target.HEIGHT1
    jumper_fraction: Optional[float] = None
    timestamp: datetime = Field(default_factory=datetime.now)

    @classmethod
    def from_hits(cls, hits: int, runs: int, **fields) -> "EstimateWithCI":
        p = hits / runs
        return cls(
            estimate=p, stderr=math.sqrt(p * (1.0 - p) / runs), runs=runs, **fields
        )

    @property
    def jumper_stderr(self) -> Optional[float]:
        if self.jumper_fraction is None:
            return None
        f = self.jumper_fraction
        return math.sqrt(f * (1.0 - f) / self.runs)

    def interval(self, z: float = 1.96) -> tuple:
        return (
            max(0.0, self.estimate - z * self.stderr),
            min(1.0, self.estimate + z * self.stderr),
        )

    def covers(self, value: float, z: float = 4.0) -> bool:
        """True when value lies within z standard errors plus the truncation bias"""
        slack = z * max(self.stderr, 1.0 / self.runs) + self.bias_bound
        return abs(self.estimate - value) <= slack


class RunConfig(BaseModel):
    params: ProtocolParams
    policy: str = "bait-and-switch"
    table_path: Optional[str] = None
    target: Target = Target.HEIGHT1
    runs: int = Field(ge=1)
    seed: int = 0
    deficit_cutoff: Optional[int] = None
    warmup_jumpers: int = Field(default=10000, ge=1)
    batch_size: int = Field(default=4096, ge=1)
    workers: int = Field(default=1, ge=1)

    @model_validator(mode="after")
    def _check_cutoff(self) -> "RunConfig":
        if self.deficit_cutoff is not None and self.deficit_cutoff < self.params.k:
            raise ValueError(
                f"deficit cutoff {self.deficit_cutoff} must be at least k={self.params.k}"
            )
        return self

    def cutoff(self, offset: int = 60) -> int:
        return self.deficit_cutoff if self.deficit_cutoff is not None else self.params.k + offset


class CheckResult(BaseModel):
    name: str
    passed: bool
    detail: str = ""
    values: List[float] = Field(default_factory=list)
