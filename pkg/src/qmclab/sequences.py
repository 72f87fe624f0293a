"""Finite point sets on [0, 1] used as QMC nodes.

Every generator returns a :class:`PointSet`, which always stores its points
sorted. The original generation order is not kept because discrepancy and the
QMC average do not depend on it.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = [
    "OutOfDomainError",
    "PointSet",
    "from_samples",
    "load_points",
    "midpoint_set",
    "parse_sequence",
    "random_uniform",
    "sequence_prefix",
    "uniform_grid",
    "van_der_corput",
    "van_der_corput_set",
]


class OutOfDomainError(ValueError):
    """A sample lies outside [0, 1]."""

    def __init__(self, index: int, value: float):
        self.index = index
        self.value = value
        super().__init__(f"value {value!r} at index {index} is outside [0, 1]")


@dataclass(frozen=True)
class PointSet:
    points: np.ndarray
    provenance: str = "list"

    def __post_init__(self):
        pts = np.array(self.points, dtype=np.float64).ravel()
        if pts.size == 0:
            raise ValueError("a PointSet needs at least one point")
        bad = np.flatnonzero(~((pts >= 0.0) & (pts <= 1.0)))
        if bad.size:
            raise OutOfDomainError(int(bad[0]), float(pts[bad[0]]))
        pts = np.sort(pts, kind="stable")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return int(self.points.size)

    def __len__(self) -> int:
        return self.n

    def has_duplicates(self) -> bool:
        return bool(np.any(np.diff(self.points) == 0.0))


def van_der_corput(index: int, base: int = 2) -> float:
    """Radical inverse of ``index`` in ``base``.

    Digits are extracted with integer arithmetic and folded in from the most
    significant one, ``r = (d + r) / base``, so base-2 values are exact.

    >>> van_der_corput(3)
    0.75
    """
    if base < 2:
        raise ValueError(f"base must be >= 2, got {base}")
    if index < 1:
        raise ValueError(f"index must be >= 1, got {index}")
    digits = []
    while index:
        index, d = divmod(index, base)
        digits.append(d)
    r = 0.0
    for d in reversed(digits):
        r = (d + r) / base
    return r


def _radical_inverse(indices: np.ndarray, base: int) -> np.ndarray:
    idx = indices.astype(np.int64)
    ndigits = 1
    top = int(idx.max())
    while base**ndigits <= top:
        ndigits += 1
    digits = [(idx // base**j) % base for j in range(ndigits)]
    r = np.zeros(idx.shape, dtype=np.float64)
    # leading zeros leave r at 0.0, so this matches the scalar loop bit for bit
    for d in reversed(digits):
        r = (d + r) / base
    return r


def van_der_corput_set(n: int, base: int = 2) -> PointSet:
    """The first ``n`` van der Corput points (indices 1..n)."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if base < 2:
        raise ValueError(f"base must be >= 2, got {base}")
    pts = _radical_inverse(np.arange(1, n + 1), base)
    return PointSet(pts, f"van-der-corput({base})")


def midpoint_set(n: int) -> PointSet:
    """Points ``(2k - 1) / (2n)`` for ``k = 1..n``; the unique minimiser of D*."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    k = np.arange(1, n + 1, dtype=np.float64)
    return PointSet((2.0 * k - 1.0) / (2.0 * n), "midpoint")


def uniform_grid(n: int) -> PointSet:
    """Left-endpoint grid ``(k - 1) / n`` for ``k = 1..n``."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return PointSet(np.arange(n, dtype=np.float64) / n, "uniform-grid")


def random_uniform(n: int, seed: int) -> PointSet:
    """``n`` i.i.d. uniform draws on [0, 1) from numpy's PCG64 bit generator.

    The draws are ``Generator(PCG64(seed)).random(n)``, so a prefix of length
    ``n`` is the same for every larger ``n`` with the same seed.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    rng = np.random.Generator(np.random.PCG64(seed))
    return PointSet(rng.random(n), f"random({seed})")


def from_samples(values, provenance: str = "list") -> PointSet:
    """Wrap explicit values; raises :class:`OutOfDomainError` on the first bad one."""
    return PointSet(np.asarray(values, dtype=np.float64), provenance)


def load_points(path) -> PointSet:
    """Read one number per line; blank lines and ``#`` comments are skipped."""
    path = Path(path)
    values = []
    with path.open() as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if line:
                values.append(float(line))
    return from_samples(values, f"file({path})")


def sequence_prefix(spec: str, n: int, seed: int = 0) -> np.ndarray:
    """First ``n`` terms in generation order (a PointSet would sort them)."""
    name, _, arg = spec.partition(":")
    name = name.strip().lower()
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if name in ("vdc", "van-der-corput"):
        base = int(arg) if arg else 2
        if base < 2:
            raise ValueError(f"base must be >= 2, got {base}")
        return _radical_inverse(np.arange(1, n + 1), base)
    if name == "random":
        rng = np.random.Generator(np.random.PCG64(int(arg) if arg else seed))
        return rng.random(n)
    return np.asarray(parse_sequence(spec, n, seed).points)


def parse_sequence(spec: str, n: int, seed: int = 0) -> PointSet:
    """Build a point set from a textual id.

    Accepted ids: ``vdc[:base]`` (alias ``van-der-corput``), ``midpoint``,
    ``grid`` (alias ``uniform-grid``), ``random[:seed]`` and ``file:path``.
    A file is used as is and ``n`` is ignored.
    """
    name, _, arg = spec.partition(":")
    name = name.strip().lower()
    if name in ("vdc", "van-der-corput"):
        return van_der_corput_set(n, int(arg) if arg else 2)
    if name == "midpoint":
        return midpoint_set(n)
    if name in ("grid", "uniform-grid"):
        return uniform_grid(n)
    if name == "random":
        return random_uniform(n, int(arg) if arg else seed)
    if name == "file":
        return load_points(arg)
    raise KeyError(f"unknown sequence {spec!r}")
