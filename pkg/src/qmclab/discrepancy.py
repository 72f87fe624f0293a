"""Star and extreme discrepancy of one-dimensional point sets.

The closed forms run in O(N) on the sorted points. The ``brute_force_*``
functions evaluate the counting definition directly at every critical interval
endpoint and are kept as independent oracles.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .sequences import PointSet

__all__ = [
    "DiscrepancyValue",
    "ORACLE_LIMIT",
    "OracleLimitError",
    "brute_force_extreme",
    "brute_force_star",
    "extreme_discrepancy",
    "star_discrepancy",
    "star_discrepancy_endpoints",
]

ORACLE_LIMIT = 4096


class OracleLimitError(ValueError):
    pass


@dataclass(frozen=True)
class DiscrepancyValue:
    value: float
    kind: str
    n: int

    def __float__(self) -> float:
        return self.value


def star_discrepancy(ps: PointSet) -> DiscrepancyValue:
    """Star discrepancy, ``1/(2N) + max_n |x_n - (2n-1)/(2N)|``.

    Same value as :func:`star_discrepancy_endpoints` up to rounding, but exact
    on the midpoint sets, where it must equal ``1/(2N)``.
    """
    x = ps.points
    N = ps.n
    k = np.arange(1, N + 1, dtype=np.float64)
    dev = np.abs(x - (2.0 * k - 1.0) / (2.0 * N)).max()
    return DiscrepancyValue(float(1.0 / (2.0 * N) + dev), "star", N)


def star_discrepancy_endpoints(ps: PointSet) -> DiscrepancyValue:
    """``max_n max(|x_n - (n-1)/N|, |x_n - n/N|)`` over the sorted points."""
    x = ps.points
    N = ps.n
    k = np.arange(1, N + 1, dtype=np.float64)
    lo = np.abs(x - (k - 1.0) / N).max()
    hi = np.abs(x - k / N).max()
    return DiscrepancyValue(float(max(lo, hi)), "star", N)


def extreme_discrepancy(ps: PointSet) -> DiscrepancyValue:
    """``1/N + max_n(n/N - x_n) - min_n(n/N - x_n)``, capped at 1."""
    x = ps.points
    N = ps.n
    k = np.arange(1, N + 1, dtype=np.float64)
    d = k / N - x
    value = 1.0 / N + (d.max() - d.min())
    return DiscrepancyValue(float(min(value, 1.0)), "extreme", N)


def _critical_points(x: np.ndarray) -> np.ndarray:
    # each point, the next representable float above it (the right limit of a
    # half-open interval ending there), and both ends of [0, 1]
    ups = np.nextafter(x, np.inf)
    ups = ups[ups <= 1.0]
    return np.unique(np.concatenate(([0.0, 1.0], x, ups)))


def _count_below(x: np.ndarray, c: np.ndarray) -> np.ndarray:
    # direct comparison, deliberately not searchsorted
    counts = np.empty(c.size, dtype=np.int64)
    step = max(1, 2_000_000 // max(x.size, 1))
    for s in range(0, c.size, step):
        counts[s : s + step] = (x[None, :] < c[s : s + step, None]).sum(axis=1)
    return counts


def _check_limit(ps: PointSet, limit: int):
    if ps.n > limit:
        raise OracleLimitError(f"oracle limited to n <= {limit}, got n = {ps.n}")


def brute_force_star(ps: PointSet, limit: int = ORACLE_LIMIT) -> DiscrepancyValue:
    """Max of ``|A_N([0, b))/N - b|`` over every critical ``b``."""
    _check_limit(ps, limit)
    x = np.asarray(ps.points)
    N = ps.n
    b = _critical_points(x)
    b = b[b > 0.0]
    b = np.union1d(b, np.arange(1, N + 1) / N)
    counts = _count_below(x, b)
    return DiscrepancyValue(float(np.abs(counts / N - b).max()), "star", N)


def brute_force_extreme(ps: PointSet, limit: int = ORACLE_LIMIT) -> DiscrepancyValue:
    """Max of ``|A_N([a, b))/N - (b - a)|`` over critical pairs ``a < b``."""
    _check_limit(ps, limit)
    x = np.asarray(ps.points)
    N = ps.n
    c = _critical_points(x)
    counts = _count_below(x, c)
    best = 0.0
    for i in range(c.size - 1):
        a = c[i]
        inside = (counts[i + 1 :] - counts[i]) / N
        length = c[i + 1 :] - a
        best = max(best, float(np.abs(inside - length).max()))
    return DiscrepancyValue(best, "extreme", N)
