"""Variation functionals of sampled functions.

All values are computed from the grid samples only. A sup over intervals with
endpoints on the grid is exact when the grid holds every local extremum and a
lower bound otherwise.

Sums of increments are accumulated endpoint by endpoint, left to right:
``acc - f(a) + f(b)`` for a rising interval and ``acc + f(a) - f(b)`` for a
falling one. Float addition is monotone, so the dynamic program below returns
exactly the largest such float sum, and the exhaustive oracle reproduces it bit
for bit.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .functions import SampledFunction

__all__ = [
    "MAX_P",
    "ORACLE_MAX_GRID",
    "VariationProfile",
    "holder_seminorm",
    "log_growth_constant",
    "modulus_of_variation",
    "modulus_of_variation_oracle",
    "nu_profile",
    "nu_upper_bound_holder",
    "nu_upper_bound_pvar",
    "oracle_profile",
    "total_p_variation",
    "var1_by_runs",
    "variation_profile",
]

MAX_P = 64.0
ORACLE_MAX_GRID = 24


def _samples(f) -> np.ndarray:
    if isinstance(f, SampledFunction):
        return np.asarray(f.values, dtype=np.float64)
    return np.asarray(f, dtype=np.float64).ravel()


def nu_profile(f, kmax: int) -> np.ndarray:
    """``[nu(f; 1), ..., nu(f; kmax)]`` in one pass over the samples.

    Three max-plus states are carried for every interval budget ``k``: no
    interval open, a rising interval open, a falling interval open. At each
    sample, open intervals may close and then a new one may open at the same
    abscissa. Cost is O(M * min(kmax, M)).
    """
    if kmax < 1:
        raise ValueError(f"interval count must be >= 1, got {kmax}")
    v = _samples(f)
    # no more than M - 1 intervals fit between M distinct abscissae
    K = max(1, min(int(kmax), v.size - 1))
    closed = np.zeros(K + 1)
    rising = np.full(K + 1, -np.inf)
    falling = np.full(K + 1, -np.inf)
    tmp = np.empty(K + 1)
    for y in v:
        np.add(rising, y, out=tmp)
        np.maximum(closed, tmp, out=closed)
        np.subtract(falling, y, out=tmp)
        np.maximum(closed, tmp, out=closed)
        np.maximum(rising[1:], closed[:-1] - y, out=rising[1:])
        np.maximum(falling[1:], closed[:-1] + y, out=falling[1:])
    out = closed[1:]
    if kmax > K:
        out = np.concatenate((out, np.full(kmax - K, out[-1])))
    return out


def modulus_of_variation(f, n: int) -> float:
    """Largest sum of ``|f(b_j) - f(a_j)|`` over at most ``n`` non-overlapping grid intervals."""
    if n < 1:
        raise ValueError(f"interval count must be >= 1, got {n}")
    return float(nu_profile(f, n)[n - 1])


def modulus_of_variation_oracle(f, n: int) -> float:
    """Exhaustive search over every collection of at most ``n`` grid intervals.

    Collections share endpoints freely (``a_1 < b_1 <= a_2 < b_2 <= ...``).
    Each interval takes whichever orientation gives the larger running sum.
    Only for grids of at most ``ORACLE_MAX_GRID`` points.
    """
    return float(oracle_profile(f, n)[n - 1])


def oracle_profile(f, kmax: int) -> np.ndarray:
    """Oracle values for every budget ``1..kmax`` from one enumeration."""
    if kmax < 1:
        raise ValueError(f"interval count must be >= 1, got {kmax}")
    v = _samples(f)
    M = v.size
    if M > ORACLE_MAX_GRID:
        raise ValueError(f"oracle needs a grid of at most {ORACLE_MAX_GRID} points, got {M}")
    exact = np.zeros(kmax)
    for m in range(1, min(kmax, M - 1) + 1):
        for ends in _collections(M, m):
            acc = np.zeros(ends.shape[0])
            for j in range(m):
                a = v[ends[:, 2 * j]]
                b = v[ends[:, 2 * j + 1]]
                acc = np.maximum((acc - a) + b, (acc + a) - b)
            exact[m - 1] = max(exact[m - 1], float(acc.max()))
    return np.maximum.accumulate(exact)


def _collections(M: int, m: int, chunk: int = 200_000):
    """Yield index arrays of shape (rows, 2m) listing a_1 < b_1 <= a_2 < ... < b_m."""
    # e_i = c_i - i//2 maps strictly increasing c in range(M + m - 1) one to
    # one onto such endpoint sequences
    shift = np.arange(2 * m) // 2
    it = itertools.combinations(range(M + m - 1), 2 * m)
    while True:
        block = list(itertools.islice(it, chunk))
        if not block:
            return
        yield np.array(block, dtype=np.int64) - shift


def total_p_variation(f, p: float) -> float:
    """Grid-restricted ``Var_p``: max over partitions of ``(sum |increment|^p)^(1/p)``.

    Dynamic program ``V(i) = max_{j<i} V(j) + |f_i - f_j|^p``, O(M^2).
    """
    if not p >= 1:
        raise ValueError(f"p must be >= 1, got {p}")
    if p > MAX_P:
        raise ValueError(f"p must be <= {MAX_P:g}, got {p}")
    v = _samples(f)
    V = np.zeros(v.size)
    for i in range(1, v.size):
        V[i] = np.max(V[:i] + np.abs(v[i] - v[:i]) ** p)
    return float(V[-1] ** (1.0 / p))


def var1_by_runs(f) -> float:
    """Total variation as the sum of absolute changes between turning points."""
    v = _samples(f)
    d = np.diff(v)
    d = d[d != 0.0]
    if d.size == 0:
        return 0.0
    turns = np.flatnonzero(np.sign(d[1:]) != np.sign(d[:-1]))
    # ends of monotone runs, expressed as positions in the compressed samples
    keep = np.flatnonzero(np.diff(v) != 0.0)
    knots = np.concatenate(([keep[0]], keep[turns + 1], [keep[-1] + 1]))
    return float(np.sum(np.abs(np.diff(v[knots]))))


def _check_omega(omega: Callable, samples: int = 257):
    t = np.linspace(0.0, 1.0, samples)
    w = np.asarray(omega(t), dtype=np.float64)
    if not np.all(np.diff(w) >= 0) or w[0] != 0.0:
        raise ValueError("omega must be non-decreasing with omega(0) = 0")
    if not np.all(w[1:] > 0):
        raise ValueError("omega must be positive on (0, 1]")


def holder_seminorm(f: SampledFunction, omega: Callable) -> float:
    """Largest ``|f(x) - f(y)| / omega(|x - y|)`` over grid pairs."""
    _check_omega(omega)
    x, v = f.grid, f.values
    best = 0.0
    for d in range(1, x.size):
        r = np.abs(v[d:] - v[:-d]) / omega(x[d:] - x[:-d])
        best = max(best, float(r.max()))
    return best


def nu_upper_bound_pvar(n: int, p: float, var_p: float) -> float:
    """``n ** (1 - 1/p) * var_p``; follows from Hoelder's inequality."""
    return n ** (1.0 - 1.0 / p) * var_p


def nu_upper_bound_holder(n: int, omega: Callable, seminorm: float) -> float:
    """``seminorm * n * omega(1/n)``, the worst case of ``n`` equal intervals."""
    return seminorm * n * float(omega(1.0 / n))


@dataclass
class VariationProfile:
    nu: np.ndarray
    var_p: dict = field(default_factory=dict)
    holder: Optional[tuple] = None

    def __getitem__(self, k: int) -> float:
        """``nu(f; k)`` with 1-based ``k``."""
        return float(self.nu[k - 1])

    @property
    def kmax(self) -> int:
        return int(self.nu.size)


def variation_profile(f: SampledFunction, kmax: int, ps=(1.0, 2.0), omega=None) -> VariationProfile:
    prof = VariationProfile(nu_profile(f, kmax), {float(p): total_p_variation(f, p) for p in ps})
    omega = omega if omega is not None else f.omega
    if omega is not None:
        prof.holder = (str(omega), holder_seminorm(f, omega))
    return prof


def log_growth_constant(f, kmax: int) -> float:
    """``max_k nu(f; k) / (1 + log k)`` for ``k <= kmax``."""
    nu = nu_profile(f, kmax)
    k = np.arange(1, kmax + 1)
    return float(np.max(nu / (1.0 + np.log(k))))
