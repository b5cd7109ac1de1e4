"""
src/analytic/series.py

Truncated power series with float coefficients.

Products and quotients keep the lower of the two orders, so every coefficient
of a result is exact up to floating-point rounding.
"""

from typing import Optional, Sequence

import numpy as np
from scipy.special import gammaln


class TruncatedSeries:
    """c[0] + c[1]*r + ... + c[order]*r**order"""

    __array_priority__ = 100.0

    def __init__(self, coefficients: Sequence[float], order: Optional[int] = None):
        c = np.asarray(coefficients, dtype=float)
        if c.ndim != 1 or (len(c) == 0 and order is None):
            raise ValueError(f"coefficients must be a non-empty vector, got shape {c.shape}")
        if order is None:
            order = len(c) - 1
        if order < 0:
            raise ValueError(f"order cannot be less than zero: order = {order}")
        if len(c) > order + 1:
            c = c[: order + 1]
        elif len(c) < order + 1:
            c = np.concatenate([c, np.zeros(order + 1 - len(c))])
        self.c = c

    @property
    def order(self) -> int:
        return len(self.c) - 1

    @classmethod
    def constant(cls, value: float, order: int) -> "TruncatedSeries":
        return cls([value], order=order)

    @classmethod
    def exp_linear(cls, scale: float, slope: float, order: int) -> "TruncatedSeries":
        """Series of exp(scale + slope*r), built in log space"""
        q = np.arange(order + 1)
        if slope == 0:
            return cls.constant(np.exp(scale), order)
        magnitude = np.exp(scale + q * np.log(abs(slope)) - gammaln(q + 1))
        if slope < 0:
            magnitude = magnitude * np.where(q % 2 == 0, 1.0, -1.0)
        return cls(magnitude)

    def __getitem__(self, i):
        return self.c[i]

    def __len__(self) -> int:
        return len(self.c)

    def __iter__(self):
        return iter(self.c)

    def __add__(self, x):
        if isinstance(x, TruncatedSeries):
            order = min(self.order, x.order)
            return TruncatedSeries(self.c[: order + 1] + x.c[: order + 1])
        c = self.c.copy()
        c[0] += x
        return TruncatedSeries(c)

    def __radd__(self, x):
        return self + x

    def __neg__(self):
        return TruncatedSeries(-self.c)

    def __sub__(self, x):
        return self + (-x)

    def __rsub__(self, x):
        return -self + x

    def __mul__(self, x):
        if isinstance(x, TruncatedSeries):
            order = min(self.order, x.order)
            return TruncatedSeries(np.convolve(self.c, x.c)[: order + 1])
        return TruncatedSeries(x * self.c)

    def __rmul__(self, x):
        return self * x

    def __truediv__(self, x):
        if not isinstance(x, TruncatedSeries):
            return TruncatedSeries(self.c / x)
        if x.c[0] == 0:
            raise ZeroDivisionError("leading coefficient of the denominator is zero")
        order = min(self.order, x.order)
        ans = np.zeros(order + 1)
        for n in range(order + 1):
            # denominator coefficients x[n], x[n-1], ..., x[1] against ans[0..n-1]
            ans[n] = (self.c[n] - np.dot(ans[:n], x.c[n:0:-1])) / x.c[0]
        return TruncatedSeries(ans)

    def __rtruediv__(self, x):
        return TruncatedSeries.constant(x, self.order) / self

    def shift(self, places: int) -> "TruncatedSeries":
        """Multiply by r**places, keeping the order"""
        if places <= 0:
            return TruncatedSeries(self.c)
        return TruncatedSeries(np.concatenate([np.zeros(places), self.c])[: len(self.c)])

    def tail_sums(self) -> "TruncatedSeries":
        """Coefficients sum_{q >= i} c[q]"""
        return TruncatedSeries(np.cumsum(self.c[::-1])[::-1])

    def __call__(self, r: float) -> float:
        return float(np.polynomial.polynomial.polyval(r, self.c))

    def __repr__(self) -> str:
        return f"TruncatedSeries(order={self.order}, c={np.array2string(self.c[:6], precision=6)}...)"
