"""Batch command-line interface.

Every experiment is a subcommand that writes a CSV plus a JSON manifest of
the fully resolved configuration. Values come from built-in defaults, then
an optional --config JSON file, then explicit flags (highest priority).
Because the manifest stores the resolved configuration and carries no
wall-clock data, `--config <manifest>` replays a run byte-for-byte.

Output paths default into $BLINDJAM_OUT (or the working directory).
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from dataclasses import dataclass

from .constellation import fit_dmin_exponent
from .experiments import (
    compare_schemes,
    fit_dof,
    leakage_slope,
    read_sweep_csv,
    sweep_power,
    sweep_ser,
    write_compare_csv,
    write_dmin_csv,
    write_manifest,
    write_ser_csv,
    write_sweep_csv,
)

__all__ = ["RunConfig", "parse_p_grid", "parse_int_list", "build_parser",
           "entrypoint", "main"]


@dataclass(frozen=True)
class RunConfig:
    """A resolved invocation: the subcommand plus its full parameter map."""

    command: str
    params: dict


def parse_p_grid(spec) -> list[float]:
    """Power grid: explicit list "1e2,1e3,1e4" or "start:stop:points-per-decade"."""
    if isinstance(spec, (list, tuple)):
        return [float(x) for x in spec]
    s = str(spec).strip()
    if ":" in s:
        parts = s.split(":")
        if len(parts) != 3:
            raise ValueError("grid range must be start:stop:points_per_decade")
        start, stop, ppd = float(parts[0]), float(parts[1]), int(parts[2])
        if start <= 0 or stop < start or ppd < 1:
            raise ValueError("grid range must satisfy 0 < start <= stop, ppd >= 1")
        n = int(round(math.log10(stop / start) * ppd)) + 1
        return [start * 10.0 ** (k / ppd) for k in range(n)]
    vals = [float(tok) for tok in s.split(",") if tok.strip()]
    if not vals:
        raise ValueError("empty power grid")
    return vals


def parse_int_list(spec) -> list[int]:
    if isinstance(spec, (list, tuple)):
        return [int(x) for x in spec]
    vals = [int(tok) for tok in str(spec).split(",") if tok.strip()]
    if not vals:
        raise ValueError("empty integer list")
    return vals


_DEFAULTS: dict[str, dict] = {
    "sweep": dict(kind="Blind", delta=0.05, draws=5, seed=42, workers=1,
                  mi_samples=20000, ser_trials=200000, min_errors=100,
                  include_ser=True),
    "ser": dict(kind="Blind", delta=0.1, draws=10, seed=42, workers=1,
                trials=200000, min_errors=100),
    "leakage": dict(kind="Blind", delta=0.05, draws=5, seed=42, workers=1,
                    mi_samples=20000, exclude_lowest=0),
    "dmin": dict(draws=50, seed=42),
    "compare": dict(delta=0.05, draws=5, seed=42, workers=1,
                    mi_samples=20000, exclude_lowest=0),
    "report": dict(exclude_lowest=0),
}

_REQUIRED: dict[str, tuple[str, ...]] = {
    "sweep": ("m", "p"),
    "ser": ("m", "p"),
    "leakage": ("m", "p"),
    "dmin": ("m", "q"),
    "compare": ("m", "p"),
    "report": ("input",),
}


def _add(sp, *names, **kw):
    kw.setdefault("default", None)
    sp.add_argument(*names, **kw)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="blindjam",
        description="Simulation experiments for helper-assisted wiretap jamming schemes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, with_kind=True, with_workers=True):
        _add(sp, "--config", help="JSON file (e.g. a previous manifest) with parameter defaults")
        _add(sp, "--m", type=int, help="helper count")
        _add(sp, "--seed", type=int, help="root RNG seed")
        _add(sp, "--draws", type=int, help="independent channel draws")
        _add(sp, "--out", help="output CSV path")
        if with_kind:
            _add(sp, "--kind", choices=("Blind", "CsiAligned", "GaussianJam"))
        if with_workers:
            _add(sp, "--workers", type=int, help="worker threads (results identical for any count)")

    sp = sub.add_parser("sweep", help="power sweep: SER and rate bound per (draw, p)")
    common(sp)
    _add(sp, "--delta", type=float)
    _add(sp, "--p", help="power grid: list 1e2,1e3,... or start:stop:ppd")
    _add(sp, "--mi-samples", dest="mi_samples", type=int)
    _add(sp, "--ser-trials", dest="ser_trials", type=int)
    _add(sp, "--min-errors", dest="min_errors", type=int)
    _add(sp, "--no-ser", dest="include_ser", action="store_const", const=False,
         help="skip the reliability estimate")

    sp = sub.add_parser("ser", help="reliability-only power sweep")
    common(sp)
    _add(sp, "--delta", type=float)
    _add(sp, "--p", help="power grid")
    _add(sp, "--trials", type=int)
    _add(sp, "--min-errors", dest="min_errors", type=int)
    _add(sp, "--sigma1", type=float, help="override legitimate-side noise level")

    sp = sub.add_parser("leakage", help="power sweep and leakage-slope fit")
    common(sp)
    _add(sp, "--delta", type=float)
    _add(sp, "--p", help="power grid")
    _add(sp, "--mi-samples", dest="mi_samples", type=int)
    _add(sp, "--exclude-lowest", dest="exclude_lowest", type=int)

    sp = sub.add_parser("dmin", help="minimum-distance scaling study")
    common(sp, with_kind=False, with_workers=False)
    _add(sp, "--q", help="q grid, e.g. 2,4,8,16,32")

    sp = sub.add_parser("compare", help="rate-bound slopes of all scheme kinds side by side")
    common(sp, with_kind=False)
    _add(sp, "--delta", type=float)
    _add(sp, "--p", help="power grid")
    _add(sp, "--mi-samples", dest="mi_samples", type=int)
    _add(sp, "--exclude-lowest", dest="exclude_lowest", type=int)

    sp = sub.add_parser("report", help="slope summary from an existing sweep CSV")
    _add(sp, "--config", help="JSON file with parameter defaults")
    _add(sp, "--input", help="sweep CSV to analyze")
    _add(sp, "--out", help="summary CSV path (optional)")
    _add(sp, "--exclude-lowest", dest="exclude_lowest", type=int)

    return parser


def resolve_config(args: argparse.Namespace, parser: argparse.ArgumentParser) -> RunConfig:
    """defaults <- config file <- explicit flags, then validate requireds."""
    command = args.command
    params = dict(_DEFAULTS[command])
    config_path = getattr(args, "config", None)
    if config_path:
        with open(config_path, encoding="utf-8") as fh:
            loaded = json.load(fh)
        known = set(params) | set(_REQUIRED[command]) | {"out", "sigma1"}
        params.update({k: v for k, v in loaded.items() if k in known})
    for key, val in vars(args).items():
        if key in ("command", "config") or val is None:
            continue
        params[key] = val
    missing = [k for k in _REQUIRED[command] if params.get(k) is None]
    if missing:
        parser.error(f"missing required option(s) for {command}: "
                     + ", ".join(f"--{k.replace('_', '-')}" for k in missing))
    if "p" in params:
        params["p"] = parse_p_grid(params["p"])
    if command == "dmin":
        params["q"] = parse_int_list(params["q"])
    if params.get("out") is None and command != "report":
        out_dir = os.environ.get("BLINDJAM_OUT", ".")
        params["out"] = os.path.join(out_dir, f"{command}.csv")
    return RunConfig(command=command, params=params)


def _manifest_path(out: str) -> str:
    stem, _ = os.path.splitext(out)
    return stem + ".manifest.json"


def _write_manifest(command: str, params: dict) -> None:
    payload = {"command": command}
    payload.update(params)
    write_manifest(_manifest_path(params["out"]), payload)


def cmd_sweep(params: dict) -> int:
    rows = sweep_power(params["kind"], params["m"], params["delta"], params["p"],
                       params["draws"], params["seed"],
                       mi_samples=params["mi_samples"],
                       ser_trials=params["ser_trials"],
                       min_errors=params["min_errors"],
                       include_ser=params["include_ser"],
                       workers=params["workers"])
    write_sweep_csv(rows, params["out"])
    _write_manifest("sweep", params)
    print(f"{len(rows)} rows -> {params['out']}")
    return 0


def cmd_ser(params: dict) -> int:
    rows = sweep_ser(params["kind"], params["m"], params["delta"], params["p"],
                     params["draws"], params["seed"], trials=params["trials"],
                     min_errors=params["min_errors"], workers=params["workers"],
                     sigma1=params.get("sigma1"))
    write_ser_csv(rows, params["out"])
    _write_manifest("ser", params)
    print(f"{len(rows)} rows -> {params['out']}")
    return 0


def cmd_leakage(params: dict) -> int:
    rows = sweep_power(params["kind"], params["m"], params["delta"], params["p"],
                       params["draws"], params["seed"],
                       mi_samples=params["mi_samples"], include_ser=False,
                       workers=params["workers"])
    write_sweep_csv(rows, params["out"])
    _write_manifest("leakage", params)
    fit = leakage_slope(rows, exclude_lowest=params["exclude_lowest"])
    print(f"{len(rows)} rows -> {params['out']}")
    print(f"leakage slope {fit.pooled.slope:.6f} (stderr {fit.pooled.slope_stderr:.6f})")
    return 0


def cmd_dmin(params: dict) -> int:
    study = fit_dmin_exponent(params["m"], params["q"], params["draws"], params["seed"])
    write_dmin_csv(study, params["out"])
    _write_manifest("dmin", params)
    print(f"{len(study.rows)} rows -> {params['out']}")
    print(f"median slope {study.median_slope:.6f}, min slope {study.min_slope:.6f}, "
          f"redraws {study.redraws}")
    return 0


def cmd_compare(params: dict) -> int:
    report = compare_schemes(params["m"], params["delta"], params["p"],
                             params["draws"], params["seed"],
                             mi_samples=params["mi_samples"],
                             exclude_lowest=params["exclude_lowest"],
                             workers=params["workers"])
    write_compare_csv(report, params["out"])
    rows_path = os.path.splitext(params["out"])[0] + "_rows.csv"
    write_sweep_csv(report.rows, rows_path)
    _write_manifest("compare", params)
    for rec in report.summary():
        print(f"{rec['kind']}: slope {rec['slope']:.6f} (stderr {rec['slope_stderr']:.6f})")
    print(f"summary -> {params['out']}; rows -> {rows_path}")
    return 0


def cmd_report(params: dict) -> int:
    rows = read_sweep_csv(params["input"])
    dof = fit_dof(rows, exclude_lowest=params["exclude_lowest"])
    leak = leakage_slope(rows, exclude_lowest=params["exclude_lowest"])
    print(f"bound slope {dof.pooled.slope:.6f} (stderr {dof.pooled.slope_stderr:.6f})")
    print(f"leakage slope {leak.pooled.slope:.6f} (stderr {leak.pooled.slope_stderr:.6f})")
    out = params.get("out")
    if out:
        with open(out, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["column", "slope", "intercept", "slope_stderr", "n",
                             "excluded_lowest"])
            for fit in (dof, leak):
                writer.writerow([fit.column, repr(fit.pooled.slope),
                                 repr(fit.pooled.intercept),
                                 repr(fit.pooled.slope_stderr), fit.pooled.n,
                                 fit.excluded_lowest])
        print(f"summary -> {out}")
    return 0


_DISPATCH = {
    "sweep": cmd_sweep,
    "ser": cmd_ser,
    "leakage": cmd_leakage,
    "dmin": cmd_dmin,
    "compare": cmd_compare,
    "report": cmd_report,
}


def entrypoint(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = resolve_config(args, parser)
    try:
        return _DISPATCH[cfg.command](cfg.params)
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    raise SystemExit(entrypoint())
