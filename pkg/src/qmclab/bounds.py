"""QMC estimate, its error, and the error bounds that compare against it."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .discrepancy import star_discrepancy
from .functions import SampledFunction, reference_integral, reference_tolerance
from .quadrature import QuadratureError, composite_gauss
from .sequences import PointSet
from .variation import VariationProfile, variation_profile

__all__ = [
    "BOUND_CONSTANT",
    "BoundReport",
    "MIN_TOL",
    "bound_report",
    "empirical_error",
    "holder_bound",
    "koksma_bound",
    "max_gap",
    "pvar_bound",
    "qmc_estimate",
    "thm1_bound",
    "thm2_bound",
    "zaremba_residual",
    "zaremba_terms",
]

# constant in 25 * D* * nu(f; N); reused for the p-variation and Hoelder forms
BOUND_CONSTANT = 25.0
MIN_TOL = 1e-12


def qmc_estimate(f: SampledFunction, ps: PointSet) -> float:
    """Mean of ``f`` over the points; ``math.fsum`` keeps the sum exactly rounded."""
    vals = np.asarray(f(ps.points), dtype=np.float64)
    return math.fsum(vals) / ps.n


def empirical_error(f: SampledFunction, ps: PointSet) -> float:
    return abs(qmc_estimate(f, ps) - reference_integral(f))


def koksma_bound(d_star: float, var1: float) -> Optional[float]:
    """``D* Var_1``, or None when the variation is infinite."""
    if var1 is None or math.isinf(var1):
        return None
    return d_star * var1


def thm1_bound(d_star: float, nu_n: float) -> float:
    return BOUND_CONSTANT * d_star * nu_n


def thm2_bound(d_star: float, nu_2n2: float) -> float:
    """``D* nu(f; 2N + 2)``; valid for continuous ``f`` only."""
    return d_star * nu_2n2


def pvar_bound(n: int, d_star: float, p: float, var_p: float) -> float:
    return BOUND_CONSTANT * n ** (1.0 - 1.0 / p) * d_star * var_p


def holder_bound(n: int, d_star: float, omega: Callable, seminorm: float) -> float:
    return BOUND_CONSTANT * seminorm * n * float(omega(1.0 / n)) * d_star


def max_gap(ps: PointSet) -> float:
    """Largest gap between consecutive points, with 0 and 1 appended."""
    x = np.concatenate(([0.0], ps.points, [1.0]))
    return float(np.diff(x).max())


def zaremba_terms(f: SampledFunction, ps: PointSet, order: int = 20) -> np.ndarray:
    """``int_{x_n}^{x_{n+1}} (t - n/N) f'(t) dt`` for ``n = 0..N``.

    ``x_0 = 0`` and ``x_{N+1} = 1``. Each gap is integrated with a
    Gauss-Legendre rule, halved until two levels agree.
    """
    if f.derivative is None:
        raise ValueError(f"{f.id} has no derivative rule")
    x = np.concatenate(([0.0], ps.points, [1.0]))
    N = ps.n
    a, b = x[:-1], x[1:]
    shift = np.arange(N + 1) / N
    out = np.empty(N + 1)
    for i in range(N + 1):
        if b[i] == a[i]:
            out[i] = 0.0
            continue
        integrand = lambda t, s=shift[i]: (t - s) * f.derivative(t)
        edges = np.array([a[i], b[i]])
        prev = composite_gauss(integrand, edges, order)
        for _ in range(10):
            edges = np.linspace(a[i], b[i], 2 * edges.size - 1)
            cur = composite_gauss(integrand, edges, order)
            if abs(cur - prev) <= 1e-14 * max(1.0, abs(cur)):
                break
            prev = cur
        else:
            raise QuadratureError("gap integral did not converge", cur, abs(cur - prev))
        out[i] = cur
    return out


def zaremba_residual(f: SampledFunction, ps: PointSet) -> float:
    """``|mean - integral - sum of gap integrals|``; zero up to quadrature error."""
    if f.continuity_class != "c1":
        raise ValueError(f"{f.id} is not continuously differentiable")
    lhs = qmc_estimate(f, ps) - reference_integral(f)
    rhs = math.fsum(zaremba_terms(f, ps))
    return abs(lhs - rhs)


@dataclass
class BoundReport:
    n: int
    function_id: str
    sequence_id: str
    estimate: float
    true_integral: float
    error: float
    d_star: float
    nu_n: float
    nu_2n2: float
    tol: float
    bounds: dict = field(default_factory=dict)

    @property
    def ratios(self) -> dict:
        return {k: _ratio(self.error, b) for k, b in self.bounds.items()}

    def violations(self) -> list:
        """Names of bounds the error exceeds by more than ``tol``."""
        return [k for k, b in self.bounds.items() if self.error > b + self.tol]


def _ratio(error: float, bound: float) -> float:
    if bound == 0.0:
        return 0.0 if error == 0.0 else math.inf
    return error / bound


def bound_report(f: SampledFunction, ps: PointSet, profile: Optional[VariationProfile] = None,
                 p: float = 2.0, sequence_id: Optional[str] = None) -> BoundReport:
    """Evaluate the error and every bound whose hypotheses ``f`` meets.

    ``profile`` should reach ``2N + 2`` when ``f`` is continuous; it is built
    on demand otherwise.
    """
    N = ps.n
    need = 2 * N + 2 if f.is_continuous else N
    if profile is None or profile.kmax < need or p not in profile.var_p:
        profile = variation_profile(f, need, ps=(1.0, p))
    estimate = qmc_estimate(f, ps)
    exact = reference_integral(f)
    error = abs(estimate - exact)
    d = star_discrepancy(ps).value
    nu_n = profile[N]
    nu_2n2 = profile[2 * N + 2] if profile.kmax >= 2 * N + 2 else math.nan

    bounds = {}
    var1 = f.known_var1 if f.known_var1 is not None else profile.var_p.get(1.0)
    kb = koksma_bound(d, var1) if var1 is not None else None
    if kb is not None:
        bounds["koksma"] = kb
    bounds["thm1"] = thm1_bound(d, nu_n)
    if f.is_continuous:
        bounds["thm2"] = thm2_bound(d, nu_2n2)
    bounds[f"pvar_p{p:g}"] = pvar_bound(N, d, p, profile.var_p[p])
    if f.is_continuous and f.omega is not None and profile.holder is not None:
        bounds["holder"] = holder_bound(N, d, f.omega, profile.holder[1])

    return BoundReport(
        n=N,
        function_id=f.id,
        sequence_id=sequence_id or ps.provenance,
        estimate=estimate,
        true_integral=exact,
        error=error,
        d_star=d,
        nu_n=nu_n,
        nu_2n2=nu_2n2,
        tol=max(reference_tolerance(f), MIN_TOL),
        bounds=bounds,
    )
