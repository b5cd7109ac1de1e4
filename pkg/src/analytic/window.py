"""
src/analytic/window.py

Conditional pmf of W given L: the height gained by the adversarial branch
during the delta-window that closes an epoch, given its lead L relative to the
public height at the window's start.

  l < 0 or w < l : f1(w; a*delta)
  l = 0, w = 0   : exp(-lambda*delta)
  l > 0, w = l   : int_0^delta f2(t; l, a) exp(-lambda(delta - t)) dt
  l = 0, w > 0   : int_0^delta lambda exp(-lambda s) f1(w-1; a(delta - s)) ds
  l > 0, w > l   : int_0^delta f2(t; l, a) int_0^{delta-t} lambda exp(-lambda s)
                       f1(w-l-1; a(delta - t - s)) ds dt
"""

from functools import lru_cache
from typing import Dict, Optional

import numpy as np
import structlog

from src.core.config import SolverConfig, get_default_config
from src.core.params import ProtocolParams

from .kernels import erlang_pdf, gauss_legendre, poisson_pmf

logger = structlog.get_logger(__name__)


class WindowTable:
    """P_{W|L}(. | l) vectors for one parameter set, computed on demand"""

    def __init__(self, params: ProtocolParams, nodes: int = 64):
        self.params = params
        self.nodes = nodes
        self._vectors: Dict[int, np.ndarray] = {}
        self._outer_t, self._outer_w = gauss_legendre(nodes, 0.0, params.delta)
        self._inner: Optional[np.ndarray] = None

    def _inner_table(self, length: int) -> np.ndarray:
        """
        int_0^{delta-t} lambda exp(-lambda s) f1(q; a(delta - t - s)) ds for every
        outer node t and q < length; shape (nodes, length)
        """
        if self._inner is not None and self._inner.shape[1] >= length:
            return self._inner[:, :length]

        a, lam, delta = self.params.a, self.params.lambda_, self.params.delta
        span = delta - self._outer_t
        s_unit, w_unit = gauss_legendre(self.nodes, 0.0, 1.0)
        s = span[:, None] * s_unit[None, :]
        weights = span[:, None] * w_unit[None, :] * lam * np.exp(-lam * s)
        means = a * (span[:, None] - s)
        q = np.arange(length)
        pmf = poisson_pmf(q[None, None, :], means[:, :, None])
        self._inner = np.einsum("ij,ijq->iq", weights, pmf)
        return self._inner

    def vector(self, l: int, length: int) -> np.ndarray:
        """P(W = w | L = l) for w = 0 .. length-1"""
        # every negative lead gives the same Poisson vector
        key = -1 if l < 0 else l
        cached = self._vectors.get(key)
        if cached is not None and len(cached) >= length:
            return cached[:length]
        out = self._compute(key, length)
        self._vectors[key] = out
        return out

    def _compute(self, l: int, length: int) -> np.ndarray:
        a, lam, delta = self.params.a, self.params.lambda_, self.params.delta
        w = np.arange(length)
        if l < 0:
            return poisson_pmf(w, a * delta)

        out = np.zeros(length)
        if l == 0:
            out[0] = np.exp(-lam * delta)
            if length > 1:
                s, ws = gauss_legendre(self.nodes, 0.0, delta)
                weights = ws * lam * np.exp(-lam * s)
                pmf = poisson_pmf(w[None, 1:] - 1, a * (delta - s)[:, None])
                out[1:] = weights @ pmf
            return out

        below = min(l, length)
        out[:below] = poisson_pmf(w[:below], a * delta)
        if length <= l:
            return out

        t, wt = self._outer_t, self._outer_w
        density = wt * erlang_pdf(t, l, a)
        out[l] = float(np.dot(density, np.exp(-lam * (delta - t))))
        if length > l + 1:
            out[l + 1 :] = density @ self._inner_table(length - l - 1)
        return out


@lru_cache(maxsize=32)
def _window_table(params: ProtocolParams, nodes: int) -> WindowTable:
    logger.debug("window_table_created", params=params.describe(), nodes=nodes)
    return WindowTable(params, nodes)


def window_table(params: ProtocolParams, nodes: int = 64) -> WindowTable:
    """Shared table; the confirmation depth plays no part in W given L"""
    return _window_table(params.with_depth(1), nodes)


def window_increment_pmf(
    params: ProtocolParams, l: int, max_w: int, config: Optional[SolverConfig] = None
) -> np.ndarray:
    """P_{W|L}(w | l) for w = 0 .. max_w"""
    config = config or get_default_config()
    return window_table(params, config.quadrature_nodes()).vector(l, max_w + 1).copy()


def p_w_given_l(
    params: ProtocolParams, w: int, l: int, config: Optional[SolverConfig] = None
) -> float:
    if w < 0:
        raise ValueError(f"w must be non-negative, got {w}")
    return float(window_increment_pmf(params, l, w, config)[w])
