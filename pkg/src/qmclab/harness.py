"""Sweeps over N, rate fits and CSV/JSON emission."""

from __future__ import annotations

import csv
import io
import json
import math
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .bounds import BoundReport, bound_report
from .functions import DEFAULT_GRID_SIZE, parse_function
from .sequences import parse_sequence
from .variation import variation_profile

__all__ = [
    "COLUMNS",
    "ConfigError",
    "RateFit",
    "SweepConfig",
    "SweepResult",
    "emit",
    "fit_rate",
    "load_config",
    "parse_config",
    "parse_n_grid",
    "report_row",
    "run_sweep",
    "write_result",
]

COLUMNS = (
    "function", "sequence", "n", "estimate", "true_integral", "error", "d_star",
    "nu_n", "nu_2n2", "bound_koksma", "bound_thm1", "bound_thm2", "bound_pvar_p2",
    "bound_holder", "ratio_thm1",
)

DEFAULT_N_GRID = tuple(2**k for k in range(4, 15))


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SweepConfig:
    functions: tuple
    sequences: tuple
    n_grid: tuple = DEFAULT_N_GRID
    grid_size: int = DEFAULT_GRID_SIZE
    output: Optional[str] = None
    format: str = "csv"
    seed: int = 0
    jobs: int = 1

    def __post_init__(self):
        if not self.functions:
            raise ConfigError("at least one function is required")
        if not self.sequences:
            raise ConfigError("at least one sequence is required")
        ns = tuple(int(n) for n in self.n_grid)
        if not ns or ns[0] < 1 or any(b <= a for a, b in zip(ns, ns[1:])):
            raise ConfigError(f"n_grid must be strictly increasing positive integers, got {ns}")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {self.format!r}")
        if self.grid_size < 2:
            raise ConfigError("grid_size must be at least 2")
        object.__setattr__(self, "n_grid", ns)
        object.__setattr__(self, "functions", tuple(self.functions))
        object.__setattr__(self, "sequences", tuple(self.sequences))


@dataclass(frozen=True)
class RateFit:
    slope: float
    intercept: float
    r_squared: float
    model: str
    sup: Optional[float] = None
    argmax_n: Optional[int] = None


@dataclass
class SweepResult:
    config: SweepConfig
    reports: list = field(default_factory=list)
    fits: dict = field(default_factory=dict)

    def violations(self) -> list:
        return [(r, v) for r in self.reports for v in r.violations()]


def _loglog(ns, values):
    x = np.log(np.asarray(ns, dtype=np.float64))
    y = np.log(np.asarray(values, dtype=np.float64))
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = float(np.dot(dx, dx))
    slope = float(np.dot(dx, dy)) / sxx
    intercept = float(y.mean() - slope * x.mean())
    ss_tot = float(np.dot(dy, dy))
    resid = dy - slope * dx
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - float(np.dot(resid, resid)) / ss_tot
    return slope, intercept, min(1.0, max(0.0, r2))


def fit_rate(ns, values, model: str = "loglog", q: float = 2.0) -> RateFit:
    """Fit a convergence rate to positive ``values`` observed at sizes ``ns``.

    ``"loglog"`` is a least-squares line through ``(log N, log value)``.
    ``"logcorrected"`` reports the largest ``value * N / (log N)**q`` and the
    N attaining it; the slope fields then describe that statistic.
    """
    ns = [int(n) for n in ns]
    values = [float(v) for v in values]
    if len(ns) != len(values):
        raise ValueError("ns and values differ in length")
    if len(ns) < 3:
        raise ValueError("need at least 3 points to fit a rate")
    if any(not v > 0 for v in values):
        raise ValueError("rate fits need strictly positive values")
    if model == "loglog":
        return RateFit(*_loglog(ns, values), model="loglog")
    if model == "logcorrected":
        if min(ns) < 2:
            raise ValueError("the log-corrected statistic needs N >= 2")
        stat = [v * n / math.log(n) ** q for n, v in zip(ns, values)]
        i = int(np.argmax(stat))
        slope, intercept, r2 = _loglog(ns, stat)
        return RateFit(slope, intercept, r2, f"logcorrected(q={q:g})", stat[i], ns[i])
    raise ValueError(f"unknown rate model {model!r}")


def run_sweep(config: SweepConfig) -> SweepResult:
    """One report per (function, sequence, N), sorted in that order."""
    try:
        funcs = {fid: parse_function(fid, config.grid_size) for fid in config.functions}
        for s in config.sequences:
            parse_sequence(s, 1, config.seed)
    except (KeyError, FileNotFoundError) as exc:
        raise ConfigError(str(exc.args[0] if exc.args else exc)) from None
    kmax = 2 * config.n_grid[-1] + 2

    def profile(fid):
        return fid, variation_profile(funcs[fid], kmax, ps=(1.0, 2.0))

    def row(task):
        fid, seq, n = task
        ps = parse_sequence(seq, n, config.seed)
        return bound_report(funcs[fid], ps, profiles[fid], p=2.0, sequence_id=seq)

    tasks = sorted(
        ((fid, s, n) for fid in config.functions for s in config.sequences for n in config.n_grid),
        key=lambda t: (funcs[t[0]].id, t[1], t[2]),
    )
    jobs = max(1, int(config.jobs))
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        profiles = dict(pool.map(profile, list(funcs)))
        reports = list(pool.map(row, tasks))

    result = SweepResult(config, reports)
    for fid in config.functions:
        for seq in config.sequences:
            rows = [r for r in reports if r.function_id == funcs[fid].id and r.sequence_id == seq]
            ns = [r.n for r in rows]
            errs = [r.error for r in rows]
            if len(rows) >= 3 and all(e > 0 for e in errs) and min(ns) >= 2:
                result.fits[(funcs[fid].id, seq)] = {
                    "loglog": fit_rate(ns, errs, "loglog"),
                    "logcorrected": fit_rate(ns, errs, "logcorrected", q=2.0),
                }
    return result


# ---------------------------------------------------------------- output

def _num(x) -> str:
    if x is None:
        return ""
    x = float(x)
    if math.isnan(x):
        return ""
    return format(x, ".17g")


def report_row(r: BoundReport) -> dict:
    """Report as a column-name to value mapping; absent bounds map to None."""
    b = r.bounds
    return {
        "function": r.function_id,
        "sequence": r.sequence_id,
        "n": r.n,
        "estimate": r.estimate,
        "true_integral": r.true_integral,
        "error": r.error,
        "d_star": r.d_star,
        "nu_n": r.nu_n,
        "nu_2n2": None if math.isnan(r.nu_2n2) else r.nu_2n2,
        "bound_koksma": b.get("koksma"),
        "bound_thm1": b.get("thm1"),
        "bound_thm2": b.get("thm2"),
        "bound_pvar_p2": b.get("pvar_p2"),
        "bound_holder": b.get("holder"),
        "ratio_thm1": r.ratios.get("thm1"),
    }


def _json_value(v) -> str:
    if v is None:
        return "null"
    if isinstance(v, str):
        return json.dumps(v)
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    v = float(v)
    if not math.isfinite(v):
        return "null"
    return format(v, ".17g")


def emit(result, format: str = "csv") -> str:
    """Serialise reports. CSV is canonical; JSON is a list of objects with the same keys."""
    reports = result.reports if isinstance(result, SweepResult) else list(result)
    rows = [report_row(r) for r in reports]
    if format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(COLUMNS)
        for row in rows:
            w.writerow([v if isinstance(v, (str, int)) else _num(v) for v in (row[c] for c in COLUMNS)])
        return buf.getvalue()
    if format == "json":
        objs = [
            "  {" + ", ".join(f"{json.dumps(c)}: {_json_value(row[c])}" for c in COLUMNS) + "}"
            for row in rows
        ]
        return "[\n" + ",\n".join(objs) + ("\n]\n" if objs else "]\n")
    raise ValueError(f"unknown format {format!r}")


def write_result(result: SweepResult, path, format: str = "csv") -> Path:
    path = Path(path)
    text = emit(result, format)
    try:
        with path.open("w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc
    return path


# ---------------------------------------------------------------- config

_POW = re.compile(r"^\s*(\d+)\s*\^\s*(\d+)\s*\.\.\s*(\d+)\s*\^\s*(\d+)\s*$")


def parse_n_grid(text: str) -> tuple:
    """``"16, 32, 64"`` or a power range such as ``"2^4..2^14"``."""
    m = _POW.match(text)
    if m:
        b1, e1, b2, e2 = (int(g) for g in m.groups())
        if b1 != b2:
            raise ConfigError(f"power range needs one base: {text!r}")
        return tuple(b1**e for e in range(e1, e2 + 1))
    try:
        return tuple(int(t) for t in re.split(r"[,\s]+", text.strip()) if t)
    except ValueError:
        raise ConfigError(f"bad n_grid {text!r}") from None


def _list(text: str) -> tuple:
    return tuple(t.strip() for t in text.split(",") if t.strip())


_KEYS = {
    "functions": _list,
    "sequences": _list,
    "n_grid": parse_n_grid,
    "grid_size": int,
    "output": str,
    "format": str,
    "seed": int,
    "jobs": int,
}


def parse_config(text: str, **overrides) -> SweepConfig:
    """Read ``key = value`` lines; ``#`` starts a comment. Non-None overrides win."""
    fields = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip().lower().replace("-", "_")
        if not sep or key not in _KEYS:
            raise ConfigError(f"line {lineno}: cannot parse {raw.strip()!r}")
        try:
            fields[key] = _KEYS[key](value.strip())
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: {exc}") from None
    fields.update({k: v for k, v in overrides.items() if v is not None})
    fields.setdefault("functions", ())
    fields.setdefault("sequences", ())
    return SweepConfig(**fields)


def load_config(path, **overrides) -> SweepConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror or exc}") from None
    return parse_config(text, **overrides)

