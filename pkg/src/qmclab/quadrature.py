"""Composite Gauss-Legendre quadrature with dyadic refinement.

Used as the reference-integral oracle where no closed form is wired in, and
for the derivative integrals of the Zaremba check.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = [
    "QuadratureError",
    "QuadratureResult",
    "composite_gauss",
    "integrate",
    "xsin_inv_integral",
]

DEFAULT_ORDER = 20


class QuadratureError(RuntimeError):
    def __init__(self, message: str, estimate: float, error: float):
        self.estimate = estimate
        self.error = error
        super().__init__(f"{message} (estimate {estimate!r}, achieved error {error:.3g})")


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error: float
    levels: int


@lru_cache(maxsize=None)
def _nodes(order: int):
    t, w = np.polynomial.legendre.leggauss(order)
    return t, w


def composite_gauss(func, edges, order: int = DEFAULT_ORDER) -> float:
    """Apply an ``order``-point Gauss-Legendre rule on every [edges[i], edges[i+1]]."""
    edges = np.asarray(edges, dtype=np.float64)
    a, b = edges[:-1], edges[1:]
    t, w = _nodes(order)
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    x = mid[:, None] + half[:, None] * t[None, :]
    fx = np.asarray(func(x), dtype=np.float64)
    per_cell = (fx * w[None, :]).sum(axis=1) * half
    return float(np.sum(per_cell))


def _refine(edges: np.ndarray) -> np.ndarray:
    mids = 0.5 * (edges[:-1] + edges[1:])
    out = np.empty(2 * edges.size - 1)
    out[0::2] = edges
    out[1::2] = mids
    return out


def integrate(func, edges, tol: float = 1e-10, order: int = DEFAULT_ORDER,
              max_levels: int = 12) -> QuadratureResult:
    """Integrate ``func`` over ``[edges[0], edges[-1]]``.

    ``edges`` should contain every kink or jump of ``func``. All cells are
    halved together until two successive levels agree to ``tol``.
    """
    edges = np.unique(np.asarray(edges, dtype=np.float64))
    if edges.size < 2:
        return QuadratureResult(0.0, 0.0, 0)
    prev = composite_gauss(func, edges, order)
    diff = np.inf
    for level in range(1, max_levels + 1):
        edges = _refine(edges)
        cur = composite_gauss(func, edges, order)
        diff = abs(cur - prev)
        if diff <= tol:
            return QuadratureResult(cur, diff, level)
        prev = cur
    raise QuadratureError("quadrature did not converge", prev, diff)


def xsin_inv(x):
    x = np.asarray(x, dtype=np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        y = x * np.sin(1.0 / x)
    return np.where(x == 0.0, 0.0, y)


def xsin_inv_integral(tol: float = 1e-10, cutoff: float | None = None) -> QuadratureResult:
    """Integral of ``x sin(1/x)`` over [0, 1].

    The range [eps, 1] is split at the zeros ``1/(k pi)`` so each cell holds
    half an oscillation. ``|x sin(1/x)| <= x`` bounds the dropped piece
    [0, eps] by ``eps**2 / 2``; that bound is added to the reported error.
    """
    if cutoff is None:
        # spend half the budget on the truncated piece
        cutoff = float(np.sqrt(tol))
    kmax = int(np.floor(1.0 / (np.pi * cutoff)))
    zeros = 1.0 / (np.pi * np.arange(kmax, 0, -1, dtype=np.float64))
    edges = np.concatenate(([cutoff], zeros[zeros > cutoff], [1.0]))
    res = integrate(xsin_inv, edges, tol=tol / 2)
    tail = 0.5 * cutoff * cutoff
    return QuadratureResult(res.value, res.error + tail, res.levels)
