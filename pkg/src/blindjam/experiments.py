"""Power sweeps and slope analysis.

A sweep evaluates one scheme kind over a grid of powers and a set of
independent channel draws, producing flat rows ready for CSV. Slope fits
regress the rate bound (or the leakage term) against half the log power,
which is the natural abscissa for degrees-of-freedom statements.

Determinism contract: every cell of a sweep derives its own RNG substreams
from (root seed, kind, draw, grid index), cells are computed independently,
and rows are ordered by (draw, grid index) before output; the result is
byte-identical for any worker count.
"""
from __future__ import annotations

import csv
import json
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .channel import ChannelRealization, default_budget, sample_channel
from .constellation import DEFAULT_POINT_CAP
from .infometrics import MC_COMPONENT_CAP, rate_lower_bound
from .receiver import ErrorEstimate, estimate_ser
from .schemes import (
    SchemeConfig,
    make_blind_scheme,
    make_csi_scheme,
    make_gaussian_jam_scheme,
    schedule_q,
)
from .streams import child_seed

__all__ = [
    "SweepRow",
    "SerRow",
    "OlsFit",
    "DofFit",
    "ComparisonReport",
    "sweep_power",
    "sweep_ser",
    "fit_dof",
    "leakage_slope",
    "compare_schemes",
    "ols",
    "SWEEP_COLUMNS",
    "SER_COLUMNS",
    "COMPARE_COLUMNS",
    "DMIN_COLUMNS",
    "write_sweep_csv",
    "read_sweep_csv",
    "write_ser_csv",
    "write_compare_csv",
    "write_dmin_csv",
    "write_manifest",
]

DEFAULT_SWEEP_MI_SAMPLES = 20_000
DEFAULT_SWEEP_SER_TRIALS = 200_000


@dataclass(frozen=True)
class SweepRow:
    """One (scheme kind, channel draw, power) cell of a sweep."""

    kind: str
    m: int
    delta: float
    draw_id: int
    p: float
    q: int
    a: float
    gamma: float
    i_vy1: float
    i_vy1_se: float
    i_vy2: float
    i_vy2_se: float
    bound: float
    trials: int | None = None
    errors: int | None = None
    ser: float | None = None
    ser_stderr: float | None = None

    def __post_init__(self):
        q_expect, _ = schedule_q(self.p, self.delta, self.m)
        if q_expect != self.q:
            raise ValueError("q inconsistent with the (p, delta, m) schedule")
        a_expect = self.gamma * math.sqrt(self.p) / self.q
        if abs(a_expect - self.a) > 1e-9 * max(1.0, abs(self.a)):
            raise ValueError("a inconsistent with gamma*sqrt(p)/q")


SWEEP_COLUMNS = [
    "kind", "m", "delta", "draw_id", "p", "q", "a", "gamma",
    "trials", "errors", "ser", "ser_stderr",
    "i_vy1", "i_vy1_se", "i_vy2", "i_vy2_se", "bound",
]


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def _make_config(kind: str, m: int, p: float, delta: float, ch: ChannelRealization,
                 c_bar: float, alpha_seed: int) -> SchemeConfig:
    if kind == "Blind":
        return make_blind_scheme(m, p, delta, ch.h, c_bar, alpha_seed)
    if kind == "GaussianJam":
        return make_gaussian_jam_scheme(m, p, delta, ch.h, c_bar, alpha_seed)
    if kind == "CsiAligned":
        return make_csi_scheme(m, p, delta, ch.h, ch.g)
    raise ValueError(f"unknown scheme kind {kind!r}")


def _eve_components(kind: str, m: int, q: int) -> int:
    n_jam = 0 if kind == "GaussianJam" else (m + 1 if kind == "Blind" else m)
    return (2 * q + 1) ** (m + n_jam)


def _legit_lattice_points(kind: str, m: int, q: int) -> int:
    if kind == "GaussianJam":
        return 0
    radius = (m + 1) * q if kind == "Blind" else m * q
    return (2 * q + 1) ** m * (2 * radius + 1)


def _feasible_grid(kind: str, m: int, delta: float, p_grid, cap: int) -> list[float]:
    kept = []
    for p in p_grid:
        q, _ = schedule_q(p, delta, m)
        if _eve_components(kind, m, q) > MC_COMPONENT_CAP or _legit_lattice_points(kind, m, q) > cap:
            warnings.warn(
                f"truncating power grid at p={p:g}: q={q} exceeds the component caps",
                RuntimeWarning,
            )
            break
        kept.append(p)
    return kept


def sweep_power(kind: str, m: int, delta: float, p_grid, n_draws: int, seed: int, *,
                mi_samples: int = DEFAULT_SWEEP_MI_SAMPLES,
                ser_trials: int = DEFAULT_SWEEP_SER_TRIALS,
                min_errors: int | None = 100,
                include_ser: bool = True,
                workers: int = 1,
                cap: int = DEFAULT_POINT_CAP,
                magnitude_range: tuple[float, float] = (0.5, 2.0)) -> list[SweepRow]:
    """Evaluate one scheme kind over (power grid) x (channel draws).

    Channel draws depend only on (seed, draw index), never on the kind, so
    sweeps of different kinds at the same seed see identical channels.
    """
    p_grid = [float(p) for p in p_grid]
    if len(p_grid) < 3:
        raise ValueError("power grid needs at least 3 points")
    if any(b <= a for a, b in zip(p_grid, p_grid[1:])):
        raise ValueError("power grid must be strictly increasing")
    if n_draws < 1:
        raise ValueError("n_draws must be >= 1")
    p_grid = _feasible_grid(kind, m, delta, p_grid, cap)
    if len(p_grid) < 3:
        raise ValueError("fewer than 3 feasible grid points after cap truncation")

    channels = [
        sample_channel(m, child_seed(seed, "channel", d), magnitude_range)
        for d in range(n_draws)
    ]

    def run_cell(cell):
        d, i = cell
        p = p_grid[i]
        ch = channels[d]
        budget = default_budget(ch, p)
        cfg = _make_config(kind, m, p, delta, ch, budget.c_bar,
                           child_seed(seed, "alphas", d))
        rb = rate_lower_bound(cfg, ch, budget, method="mc", n_samples=mi_samples,
                              seed=child_seed(seed, "cell", kind, d, i, "mi"))
        row = dict(
            kind=kind, m=m, delta=delta, draw_id=d, p=p, q=cfg.q, a=cfg.a,
            gamma=cfg.gamma,
            i_vy1=rb.i_v_y1.value, i_vy1_se=rb.i_v_y1.stderr,
            i_vy2=rb.i_v_y2.value, i_vy2_se=rb.i_v_y2.stderr, bound=rb.bound,
        )
        if include_ser and kind != "GaussianJam":
            est = estimate_ser(cfg, ch, ser_trials,
                               child_seed(seed, "cell", kind, d, i, "ser"),
                               min_errors=min_errors, cap=cap)
            row.update(trials=est.trials, errors=est.errors, ser=est.rate,
                       ser_stderr=est.stderr)
        return SweepRow(**row)

    cells = [(d, i) for d in range(n_draws) for i in range(len(p_grid))]
    if workers <= 1:
        rows = [run_cell(c) for c in cells]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(run_cell, cells))
    return rows


@dataclass(frozen=True)
class SerRow:
    """One (channel draw, power) cell of a reliability-only sweep."""

    p: float
    m: int
    delta: float
    draw_id: int
    trials: int
    errors: int
    rate: float
    stderr: float


def sweep_ser(kind: str, m: int, delta: float, p_grid, n_draws: int, seed: int, *,
              trials: int = DEFAULT_SWEEP_SER_TRIALS,
              min_errors: int | None = 100,
              workers: int = 1,
              cap: int = DEFAULT_POINT_CAP,
              sigma1: float | None = None,
              magnitude_range: tuple[float, float] = (0.5, 2.0)) -> list[SerRow]:
    """Reliability-only sweep (no information measures computed).

    ``sigma1`` overrides the legitimate receiver's noise level when given
    (0 is allowed and checks the noiseless decoder).
    """
    p_grid = [float(p) for p in p_grid]
    if not p_grid:
        raise ValueError("power grid is empty")
    if any(b <= a for a, b in zip(p_grid, p_grid[1:])):
        raise ValueError("power grid must be strictly increasing")
    if kind == "GaussianJam":
        raise ValueError("reliability sweeps need a lattice scheme kind")
    channels = [
        sample_channel(m, child_seed(seed, "channel", d), magnitude_range)
        for d in range(n_draws)
    ]
    if sigma1 is not None:
        channels = [
            ChannelRealization(m=ch.m, h=ch.h, g=ch.g, sigma1=sigma1,
                               sigma2=ch.sigma2, seed=ch.seed)
            for ch in channels
        ]

    def run_cell(cell):
        d, i = cell
        p = p_grid[i]
        ch = channels[d]
        budget = default_budget(ch, p)
        cfg = _make_config(kind, m, p, delta, ch, budget.c_bar,
                           child_seed(seed, "alphas", d))
        est = estimate_ser(cfg, ch, trials,
                           child_seed(seed, "cell", kind, d, i, "ser"),
                           min_errors=min_errors, cap=cap)
        return SerRow(p=p, m=m, delta=delta, draw_id=d, trials=est.trials,
                      errors=est.errors, rate=est.rate, stderr=est.stderr)

    cells = [(d, i) for d in range(n_draws) for i in range(len(p_grid))]
    if workers <= 1:
        return [run_cell(c) for c in cells]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run_cell, cells))


@dataclass(frozen=True)
class OlsFit:
    slope: float
    intercept: float
    slope_stderr: float
    n: int


def ols(x, y) -> OlsFit:
    """Ordinary least squares y = slope*x + intercept with slope stderr."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("x and y must be 1-D of equal length")
    n = x.shape[0]
    if n < 2 or np.ptp(x) == 0:
        raise ValueError("need at least 2 distinct x values")
    xbar = np.mean(x)
    sxx = float(np.sum((x - xbar) ** 2))
    slope = float(np.sum((x - xbar) * (y - np.mean(y))) / sxx)
    intercept = float(np.mean(y) - slope * xbar)
    if n > 2:
        resid = y - (slope * x + intercept)
        s2 = float(np.sum(resid ** 2)) / (n - 2)
        stderr = math.sqrt(s2 / sxx)
    else:
        stderr = 0.0
    return OlsFit(slope=slope, intercept=intercept, slope_stderr=stderr, n=n)


@dataclass(frozen=True)
class DofFit:
    """Slope of a sweep column against (1/2) log2 p, pooled and per draw."""

    pooled: OlsFit
    per_draw: tuple[tuple[int, float], ...]
    column: str
    excluded_lowest: int


def _fit_column(rows, column: str, exclude_lowest: int) -> DofFit:
    if not rows:
        raise ValueError("no rows to fit")
    ps = sorted({row.p for row in rows})
    if exclude_lowest:
        if len(ps) - exclude_lowest < 3:
            raise ValueError("degenerate grid: fewer than 3 distinct powers after exclusion")
        ps = ps[exclude_lowest:]
    keep = [row for row in rows if row.p in set(ps)]
    if len(set(row.p for row in keep)) < 3:
        raise ValueError("degenerate grid: fewer than 3 distinct powers")
    x = np.array([0.5 * math.log2(row.p) for row in keep])
    y = np.array([getattr(row, column) for row in keep])
    pooled = ols(x, y)
    per_draw = []
    for d in sorted({row.draw_id for row in keep}):
        sub = [row for row in keep if row.draw_id == d]
        if len(sub) >= 2:
            xd = np.array([0.5 * math.log2(row.p) for row in sub])
            yd = np.array([getattr(row, column) for row in sub])
            per_draw.append((d, ols(xd, yd).slope))
    return DofFit(pooled=pooled, per_draw=tuple(per_draw), column=column,
                  excluded_lowest=exclude_lowest)


def fit_dof(rows, exclude_lowest: int = 0) -> DofFit:
    """Degrees-of-freedom fit: rate bound against (1/2) log2 p."""
    return _fit_column(rows, "bound", exclude_lowest)


def leakage_slope(rows, exclude_lowest: int = 0) -> DofFit:
    """Leakage fit: eavesdropper information against (1/2) log2 p."""
    return _fit_column(rows, "i_vy2", exclude_lowest)


@dataclass(frozen=True)
class ComparisonReport:
    """Side-by-side degrees-of-freedom fits for several scheme kinds."""

    kinds: tuple[str, ...]
    fits: dict
    rows: tuple[SweepRow, ...]

    def summary(self) -> list[dict]:
        out = []
        for kind in self.kinds:
            fit = self.fits[kind]
            out.append({"kind": kind, "slope": fit.pooled.slope,
                        "slope_stderr": fit.pooled.slope_stderr,
                        "n_rows": fit.pooled.n})
        return out


def compare_schemes(m: int, delta: float, p_grid, n_draws: int, seed: int, *,
                    kinds=("Blind", "CsiAligned", "GaussianJam"),
                    mi_samples: int = DEFAULT_SWEEP_MI_SAMPLES,
                    exclude_lowest: int = 0,
                    workers: int = 1) -> ComparisonReport:
    """Fit the rate-bound slope for each kind on identical channel draws."""
    all_rows: list[SweepRow] = []
    fits = {}
    for kind in kinds:
        rows = sweep_power(kind, m, delta, p_grid, n_draws, seed,
                           mi_samples=mi_samples, include_ser=False,
                           workers=workers)
        fits[kind] = fit_dof(rows, exclude_lowest=exclude_lowest)
        all_rows.extend(rows)
    return ComparisonReport(kinds=tuple(kinds), fits=fits, rows=tuple(all_rows))


def write_sweep_csv(rows, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SWEEP_COLUMNS)
        for row in rows:
            writer.writerow([_fmt(getattr(row, col)) for col in SWEEP_COLUMNS])


def read_sweep_csv(path) -> list[SweepRow]:
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        for rec in reader:
            rows.append(SweepRow(
                kind=rec["kind"], m=int(rec["m"]), delta=float(rec["delta"]),
                draw_id=int(rec["draw_id"]), p=float(rec["p"]), q=int(rec["q"]),
                a=float(rec["a"]), gamma=float(rec["gamma"]),
                trials=int(rec["trials"]) if rec["trials"] else None,
                errors=int(rec["errors"]) if rec["errors"] else None,
                ser=float(rec["ser"]) if rec["ser"] else None,
                ser_stderr=float(rec["ser_stderr"]) if rec["ser_stderr"] else None,
                i_vy1=float(rec["i_vy1"]), i_vy1_se=float(rec["i_vy1_se"]),
                i_vy2=float(rec["i_vy2"]), i_vy2_se=float(rec["i_vy2_se"]),
                bound=float(rec["bound"]),
            ))
    return rows


SER_COLUMNS = ["p", "m", "delta", "draw_id", "trials", "errors", "rate", "stderr"]


def write_ser_csv(rows, path) -> None:
    """SER rows to CSV; accepts SerRow or SweepRow (rows without SER skipped)."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SER_COLUMNS)
        for row in rows:
            if row.trials is None:
                continue
            rate = row.rate if hasattr(row, "rate") else row.ser
            stderr = row.stderr if hasattr(row, "stderr") else row.ser_stderr
            writer.writerow([
                _fmt(row.p), _fmt(row.m), _fmt(row.delta), _fmt(row.draw_id),
                _fmt(row.trials), _fmt(row.errors), _fmt(rate), _fmt(stderr),
            ])


COMPARE_COLUMNS = ["kind", "slope", "slope_stderr", "n_rows"]


def write_compare_csv(report: ComparisonReport, path) -> None:
    """One row per scheme kind: the fitted rate-bound slope."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(COMPARE_COLUMNS)
        for rec in report.summary():
            writer.writerow([
                rec["kind"], _fmt(rec["slope"]), _fmt(rec["slope_stderr"]),
                _fmt(rec["n_rows"]),
            ])


DMIN_COLUMNS = ["draw_id", "m", "q", "dmin", "slope"]


def write_dmin_csv(study, path) -> None:
    slopes = dict(zip(range(len(study.slopes)), study.slopes))
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(DMIN_COLUMNS)
        for row in study.rows:
            writer.writerow([
                _fmt(row.draw_id), _fmt(study.m), _fmt(row.q), _fmt(row.dmin),
                _fmt(float(slopes[row.draw_id])),
            ])


def write_manifest(path, config: dict) -> None:
    """Reproducibility manifest: the full resolved configuration, nothing else.

    Deliberately excludes wall-clock information so a rerun from the
    manifest is byte-identical.
    """
    from . import __version__

    payload = dict(config)
    payload["package_version"] = __version__
    payload["gamma_rule"] = "max-admissible"
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
