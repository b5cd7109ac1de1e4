"""
src/core/params.py

Protocol parameters: mining rates, delay bound and confirmation depth.
"""

import math
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .errors import OutOfToleranceError


class ProtocolParams(BaseModel):
    """Adversarial rate a, honest rate h (blocks/second), delay bound and depth k"""

    model_config = ConfigDict(frozen=True)

    a: float = Field(ge=0.0, description="adversarial mining rate")
    h: float = Field(gt=0.0, description="honest mining rate")
    delta: float = Field(default=0.0, ge=0.0, description="propagation delay bound")
    k: int = Field(default=1, ge=1, description="confirmation depth")

    @model_validator(mode="after")
    def _finite(self) -> "ProtocolParams":
        for name in ("a", "h", "delta"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        return self

    @classmethod
    def from_rates(
        cls, lambda_: float, beta: float, delta: float = 0.0, k: int = 1
    ) -> "ProtocolParams":
        """Build from the total mining rate and the adversarial fraction"""
        if lambda_ <= 0:
            raise ValueError(f"total mining rate must be positive, got {lambda_}")
        if not 0.0 <= beta < 1.0:
            raise ValueError(f"adversarial fraction must lie in [0, 1), got {beta}")
        return cls(a=beta * lambda_, h=(1.0 - beta) * lambda_, delta=delta, k=k)

    @property
    def lambda_(self) -> float:
        return self.a + self.h

    @property
    def beta(self) -> float:
        return self.a / self.lambda_

    @property
    def honest_share(self) -> float:
        return self.h / self.lambda_

    def within_tolerance(self) -> bool:
        """True iff 1/a > 1/h + delta (a = 0 always qualifies)"""
        if self.a == 0:
            return True
        return 1.0 / self.a > 1.0 / self.h + self.delta

    def require_tolerance(self) -> None:
        if not self.within_tolerance():
            raise OutOfToleranceError(self.a, self.h, self.delta)

    def with_depth(self, k: int) -> "ProtocolParams":
        return self.model_copy(update={"k": k})

    def with_delay(self, delta: float) -> "ProtocolParams":
        return self.model_copy(update={"delta": delta})

    @staticmethod
    def tolerance_beta(lambda_: float, delta: float) -> float:
        """
        Largest adversarial fraction inside the fault-tolerance region.

        Solves 1/(beta*lambda) = 1/((1-beta)*lambda) + delta for beta; the
        boundary is 1/2 without delay and shrinks as lambda*delta grows.
        """
        c = lambda_ * delta
        if c == 0:
            return 0.5
        return ((c + 2.0) - math.sqrt(c * c + 4.0)) / (2.0 * c)

    def describe(self, digits: Optional[int] = 6) -> str:
        return (
            f"a={self.a:.{digits}g} h={self.h:.{digits}g} "
            f"lambda={self.lambda_:.{digits}g} beta={self.beta:.{digits}g} "
            f"delta={self.delta:.{digits}g} k={self.k}"
        )
