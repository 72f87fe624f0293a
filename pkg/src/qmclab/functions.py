"""Test integrands on [0, 1], sampled on grids, plus two smoothing constructions.

A :class:`SampledFunction` couples a vectorised evaluation rule with a sample
grid. Every grid-based functional in :mod:`qmclab.variation` looks only at the
cached samples, so grids are built to contain the extrema and the left limits
at jumps of each corpus entry.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import lru_cache
from pathlib import Path
from typing import Callable, Optional, Union

import numpy as np
from scipy.special import sici

from .quadrature import QuadratureResult, integrate, xsin_inv, xsin_inv_integral
from .sequences import PointSet

__all__ = [
    "CLOSED_FORM_TOL",
    "DEFAULT_CORPUS",
    "DEFAULT_GRID_SIZE",
    "PowerModulus",
    "SampledFunction",
    "corpus",
    "load_sampled_function",
    "modulus_of_continuity",
    "parse_function",
    "reference_integral",
    "reference_tolerance",
    "spline_interpolant",
    "steklov_mean",
    "uniform_grid",
]

DEFAULT_GRID_SIZE = 4097
CLOSED_FORM_TOL = 1e-12
QUADRATURE_TOL = 1e-10
G_KMAX = 2000
# distance of the node placed just left of a jump
JUMP_OFFSET = 2.0**-30

DEFAULT_CORPUS = (
    "const:0.7",
    "linear",
    "square",
    "sqrt",
    "power:0.25",
    "step:0.3",
    "sawtooth:3",
    "sin:2",
    "g",
)

Rule = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class PowerModulus:
    """The modulus ``delta ** alpha``."""

    alpha: float

    def __call__(self, delta):
        return np.power(np.asarray(delta, dtype=np.float64), self.alpha)

    def __str__(self):
        return f"delta^{self.alpha:g}"


@dataclass(frozen=True, eq=False)
class SampledFunction:
    id: str
    evaluate: Rule
    continuity_class: str
    grid: np.ndarray
    known_var1: Optional[float] = None
    reference: Union[float, Callable[[], QuadratureResult], None] = None
    reference_tol: float = CLOSED_FORM_TOL
    derivative: Optional[Rule] = None
    antiderivative: Optional[Rule] = None
    omega: Optional[Callable] = None
    breakpoints: tuple = ()
    values: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.continuity_class not in ("c1", "continuous", "bounded"):
            raise ValueError(f"unknown continuity class {self.continuity_class!r}")
        grid = np.array(self.grid, dtype=np.float64)
        if grid.size < 2 or grid[0] != 0.0 or grid[-1] != 1.0:
            raise ValueError("grid must start at 0 and end at 1")
        if np.any(np.diff(grid) <= 0):
            raise ValueError("grid must be strictly increasing")
        values = np.asarray(self.evaluate(grid), dtype=np.float64)
        grid.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)

    def __call__(self, x):
        return self.evaluate(np.asarray(x, dtype=np.float64))

    @property
    def is_continuous(self) -> bool:
        return self.continuity_class in ("c1", "continuous")

    def with_grid(self, grid) -> "SampledFunction":
        return replace(self, grid=grid)

    def __repr__(self):
        return f"SampledFunction({self.id!r}, M={self.grid.size})"


def uniform_grid(m: int) -> np.ndarray:
    """``k / (m - 1)``; the ``2m - 1`` grid is always a superset of the ``m`` grid."""
    if m < 2:
        raise ValueError("grid needs at least 2 points")
    return np.arange(m, dtype=np.float64) / (m - 1)


def _merge(*parts) -> np.ndarray:
    g = np.unique(np.concatenate([np.asarray(p, dtype=np.float64).ravel() for p in parts]))
    return g[(g >= 0.0) & (g <= 1.0)]


# ---------------------------------------------------------------- corpus

def const(c: float, m: int = DEFAULT_GRID_SIZE) -> SampledFunction:
    return SampledFunction(
        id=f"const:{c:g}",
        evaluate=lambda x: np.full(np.shape(x), float(c)),
        continuity_class="c1",
        grid=uniform_grid(m),
        known_var1=0.0,
        reference=float(c),
        derivative=lambda x: np.zeros(np.shape(x)),
        antiderivative=lambda x: float(c) * np.asarray(x),
        omega=PowerModulus(1.0),
    )


def linear(m: int = DEFAULT_GRID_SIZE) -> SampledFunction:
    return SampledFunction(
        id="linear",
        evaluate=lambda x: np.asarray(x, dtype=np.float64) * 1.0,
        continuity_class="c1",
        grid=uniform_grid(m),
        known_var1=1.0,
        reference=0.5,
        derivative=lambda x: np.ones(np.shape(x)),
        antiderivative=lambda x: 0.5 * np.asarray(x) ** 2,
        omega=PowerModulus(1.0),
    )


def square(m: int = DEFAULT_GRID_SIZE) -> SampledFunction:
    return SampledFunction(
        id="square",
        evaluate=lambda x: np.asarray(x, dtype=np.float64) ** 2,
        continuity_class="c1",
        grid=uniform_grid(m),
        known_var1=1.0,
        reference=1.0 / 3.0,
        derivative=lambda x: 2.0 * np.asarray(x),
        antiderivative=lambda x: np.asarray(x) ** 3 / 3.0,
        omega=PowerModulus(1.0),
    )


def power(alpha: float, m: int = DEFAULT_GRID_SIZE, name: Optional[str] = None) -> SampledFunction:
    """``x ** alpha``; Hoelder with exponent ``min(alpha, 1)``."""
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    return SampledFunction(
        id=name or f"power:{alpha:g}",
        evaluate=lambda x: np.power(np.asarray(x, dtype=np.float64), alpha),
        continuity_class="continuous",
        grid=uniform_grid(m),
        known_var1=1.0,
        reference=1.0 / (alpha + 1.0),
        antiderivative=lambda x: np.power(np.asarray(x), alpha + 1.0) / (alpha + 1.0),
        omega=PowerModulus(min(alpha, 1.0)),
    )


def step(c: float, m: int = DEFAULT_GRID_SIZE) -> SampledFunction:
    """Indicator of [c, 1]; right-continuous at ``c``."""
    if not 0.0 < c <= 1.0:
        raise ValueError("step location must lie in (0, 1]")
    c = float(c)
    return SampledFunction(
        id=f"step:{c:g}",
        evaluate=lambda x: (np.asarray(x) >= c).astype(np.float64),
        continuity_class="bounded",
        grid=_merge(uniform_grid(m), [c, c - JUMP_OFFSET]),
        known_var1=1.0,
        reference=1.0 - c,
        antiderivative=lambda x: np.maximum(np.asarray(x) - c, 0.0),
        breakpoints=(c,),
    )


def sawtooth(k: int, m: int = DEFAULT_GRID_SIZE) -> SampledFunction:
    """``frac(k x)``: k ramps from 0 to 1, each followed by a drop back to 0."""
    k = int(k)
    if k < 1:
        raise ValueError("sawtooth needs k >= 1")
    jumps = np.arange(1, k + 1) / k

    def rule(x):
        t = k * np.asarray(x, dtype=np.float64)
        return t - np.floor(t)

    def anti(x):
        t = k * np.asarray(x, dtype=np.float64)
        whole = np.floor(t)
        frac = t - whole
        return (0.5 * whole + 0.5 * frac**2) / k

    return SampledFunction(
        id=f"sawtooth:{k}",
        evaluate=rule,
        continuity_class="bounded",
        grid=_merge(uniform_grid(m), jumps, jumps - JUMP_OFFSET),
        known_var1=2.0 * k,
        reference=0.5,
        antiderivative=anti,
        breakpoints=tuple(jumps[:-1]),
    )


def sine(k: int, m: int = DEFAULT_GRID_SIZE) -> SampledFunction:
    """``sin(2 pi k x)``, with its extrema added to the grid."""
    k = int(k)
    if k < 1:
        raise ValueError("sine needs k >= 1")
    w = 2.0 * math.pi * k
    extrema = (2 * np.arange(2 * k) + 1) / (4.0 * k)
    return SampledFunction(
        id=f"sin:{k}",
        evaluate=lambda x: np.sin(w * np.asarray(x, dtype=np.float64)),
        continuity_class="c1",
        grid=_merge(uniform_grid(m), extrema),
        known_var1=4.0 * k,
        reference=0.0,
        derivative=lambda x: w * np.cos(w * np.asarray(x, dtype=np.float64)),
        antiderivative=lambda x: (1.0 - np.cos(w * np.asarray(x, dtype=np.float64))) / w,
        omega=PowerModulus(1.0),
    )


def _xsin_extrema(kmax: int) -> np.ndarray:
    # g'(x) = 0  <=>  tan(u) = u with u = 1/x; one root in (k pi, k pi + pi/2)
    k = np.arange(1, kmax + 1, dtype=np.float64)
    c = (k + 0.5) * np.pi
    u = c - 1.0 / c
    for _ in range(8):
        s, co = np.sin(u), np.cos(u)
        u = u - (s - u * co) / (u * s)
    return 1.0 / u


def xsin_antiderivative(x):
    """``int_0^x t sin(1/t) dt`` written with the sine integral."""
    x = np.asarray(x, dtype=np.float64)
    out = np.zeros_like(x)
    pos = x > 0
    a = 1.0 / x[pos]
    si, _ = sici(a)
    out[pos] = np.sin(a) / (2 * a * a) + 0.5 * (np.cos(a) / a - (0.5 * np.pi - si))
    return out


@lru_cache(maxsize=8)
def _g_reference(tol: float) -> QuadratureResult:
    return xsin_inv_integral(tol)


def xsin(m: int = DEFAULT_GRID_SIZE, kmax: int = G_KMAX) -> SampledFunction:
    """``g(x) = x sin(1/x)``, ``g(0) = 0``.

    The grid adds the zeros ``1/(k pi)`` and the local extrema for
    ``k <= kmax`` to the uniform grid, since the variation of ``g`` sits
    near 0.
    """
    k = np.arange(1, kmax + 1, dtype=np.float64)
    tol = QUADRATURE_TOL
    return SampledFunction(
        id="g",
        evaluate=xsin_inv,
        continuity_class="continuous",
        grid=_merge(uniform_grid(m), 1.0 / (k * np.pi), _xsin_extrema(kmax)),
        known_var1=math.inf,
        reference=lambda: _g_reference(tol),
        reference_tol=tol,
        antiderivative=xsin_antiderivative,
        omega=PowerModulus(0.5),
    )


def load_sampled_function(path, m: Optional[int] = None) -> SampledFunction:
    """Piecewise-linear function through ``x y`` pairs read from a text file.

    Abscissae must cover [0, 1]. The file's abscissae are the grid unless
    ``m`` asks for a uniform grid instead.
    """
    path = Path(path)
    rows = []
    with path.open() as fh:
        for line in fh:
            line = line.split("#", 1)[0].replace(",", " ").strip()
            if line:
                rows.append([float(v) for v in line.split()[:2]])
    data = np.array(rows, dtype=np.float64)
    order = np.argsort(data[:, 0], kind="stable")
    xs, ys = data[order, 0], data[order, 1]
    if xs[0] != 0.0 or xs[-1] != 1.0:
        raise ValueError(f"{path}: abscissae must start at 0 and end at 1")
    if np.any(np.diff(xs) <= 0):
        raise ValueError(f"{path}: duplicate abscissae")
    integral = float(np.sum(0.5 * (ys[1:] + ys[:-1]) * np.diff(xs)))
    return SampledFunction(
        id=f"file:{path}",
        evaluate=lambda x: np.interp(x, xs, ys),
        continuity_class="continuous",
        grid=xs if m is None else _merge(uniform_grid(m), xs),
        reference=integral,
        breakpoints=tuple(xs[1:-1]),
    )


_PARAMETERLESS = {
    "linear": linear,
    "square": square,
    "sqrt": lambda m: power(0.5, m, name="sqrt"),
    "g": xsin,
    "xsin": xsin,
}


def parse_function(spec: str, grid_size: int = DEFAULT_GRID_SIZE) -> SampledFunction:
    """Look up a corpus entry by id, e.g. ``"g"``, ``"step:0.3"``, ``"power:0.5"``."""
    name, _, arg = spec.strip().partition(":")
    name = name.lower()
    if name in _PARAMETERLESS and not arg:
        return _PARAMETERLESS[name](grid_size)
    try:
        if name == "const":
            return const(float(arg) if arg else 1.0, grid_size)
        if name == "power":
            return power(float(arg), grid_size)
        if name == "step":
            return step(float(arg) if arg else 0.5, grid_size)
        if name == "sawtooth":
            return sawtooth(int(arg) if arg else 1, grid_size)
        if name == "sin":
            return sine(int(arg) if arg else 1, grid_size)
    except ValueError as exc:
        raise KeyError(f"bad parameter in function id {spec!r}: {exc}") from None
    if name == "file":
        return load_sampled_function(arg)
    raise KeyError(f"unknown function {spec!r}")


def corpus(grid_size: int = DEFAULT_GRID_SIZE, ids=DEFAULT_CORPUS) -> list:
    return [parse_function(i, grid_size) for i in ids]


# ---------------------------------------------------------------- integrals

def reference_integral(f: SampledFunction) -> float:
    ref = f.reference
    if ref is None:
        res = integrate(f.evaluate, _merge([0.0, 1.0], f.breakpoints), tol=QUADRATURE_TOL)
        return res.value
    if callable(ref):
        return ref().value
    return float(ref)


def reference_tolerance(f: SampledFunction) -> float:
    if f.reference is None:
        return QUADRATURE_TOL
    return f.reference_tol


# ---------------------------------------------------------------- constructions

def steklov_mean(f: SampledFunction, h: float) -> SampledFunction:
    """Forward moving average ``(1/h) int_0^h f(x + t) dt``, ``f = f(1)`` beyond 1.

    Uses the antiderivative when the entry has one, quadrature otherwise. The
    result keeps ``f``'s grid so grid functionals stay comparable.
    """
    if not h > 0:
        raise ValueError(f"h must be positive, got {h}")
    if h > 1:
        raise ValueError(f"h must be at most 1, got {h}")
    f1 = float(f.evaluate(np.array([1.0]))[0])
    F = f.antiderivative
    if F is not None:
        F1 = float(F(np.array([1.0]))[0])

        def rule(x):
            x = np.asarray(x, dtype=np.float64)
            top = np.minimum(x + h, 1.0)
            inside = F(top) - F(x)
            beyond = f1 * np.maximum(x + h - 1.0, 0.0)
            return np.where(x >= 1.0, f1, (inside + beyond) / h)
    else:
        t, w = np.polynomial.legendre.leggauss(20)
        cells = 16

        def rule(x):
            x = np.asarray(x, dtype=np.float64)
            shape = x.shape
            x = x.ravel()
            top = np.minimum(x + h, 1.0)
            edges = x[:, None] + (top - x)[:, None] * np.arange(cells + 1)[None, :] / cells
            a, b = edges[:, :-1], edges[:, 1:]
            nodes = 0.5 * (a + b)[..., None] + 0.5 * (b - a)[..., None] * t
            s = (f.evaluate(nodes) * w).sum(axis=-1) * 0.5 * (b - a)
            beyond = f1 * np.maximum(x + h - 1.0, 0.0)
            return ((s.sum(axis=-1) + beyond) / h).reshape(shape)

    cls = "c1" if f.is_continuous else "continuous"
    return SampledFunction(
        id=f"steklov({h:g})[{f.id}]",
        evaluate=rule,
        continuity_class=cls,
        grid=f.grid,
        known_var1=f.known_var1,
        omega=f.omega,
    )


def spline_interpolant(f: SampledFunction, knots) -> SampledFunction:
    """Piecewise-linear interpolant of ``f`` at ``knots`` (0 and 1 added)."""
    k = knots.points if isinstance(knots, PointSet) else np.asarray(knots, dtype=np.float64)
    k = _merge(k, [0.0, 1.0])
    if k.size < 2:
        raise ValueError("need at least 2 distinct knots")
    y = np.asarray(f.evaluate(k), dtype=np.float64)
    return SampledFunction(
        id=f"spline[{f.id}]",
        evaluate=lambda x: np.interp(x, k, y),
        continuity_class="continuous",
        grid=_merge(f.grid, k),
        reference=float(np.sum(0.5 * (y[1:] + y[:-1]) * np.diff(k))),
        breakpoints=tuple(k[1:-1]),
    )


def modulus_of_continuity(f: SampledFunction, delta: float) -> float:
    """Largest ``|f(x) - f(y)|`` over grid pairs with ``|x - y| <= delta``.

    A lower bound on the true modulus that tightens as the grid is refined.
    """
    if not delta > 0:
        raise ValueError("delta must be positive")
    x, v = f.grid, f.values
    # uniform grids built as k/(m-1) can miss delta by one ulp
    limit = delta * (1.0 + 1e-12)
    best = 0.0
    for d in range(1, x.size):
        gaps = x[d:] - x[:-d]
        ok = gaps <= limit
        if not ok.any():
            break
        best = max(best, float(np.abs(v[d:] - v[:-d])[ok].max()))
    return best
