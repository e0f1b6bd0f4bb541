"""Command-line front end: ``qar <command> [options]``.

Exit codes: 0 on success, 2 on usage or configuration errors, 1 on
numerical failures. Errors are reported as a JSON object on standard error.
Outputs are written atomically; no partial files are left behind.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict

import numpy as np

from . import __version__
from .analysis.asymptotics import localized_asymptotics
from .analysis.optimize import maximize_cooling_power, performance_characteristic
from .analysis.scan import PRESETS, random_bound_scan
from .analysis.sweeps import correlation_sweep
from .dynamics import MODES
from .errors import ParameterError, QARError
from .io import atomic_write, csv_text, dumps, params_from_config, read_config

COMMANDS = ("characteristic", "optimize", "bound-scan", "correlations", "localized-asymptotics")
FULL_SCALE_SAMPLES = 100_000
SCAN_COLUMNS = ("seed_index", "omega_w", "g", "gamma", "T_w", "T_h", "T_c", "omega_c_star", "qdot_c_max",
                "cop_star", "cop_ratio_star")
DEFAULT_N = {"characteristic": 150, "optimize": 200, "bound-scan": 2000, "correlations": 40}


class UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qar", description="Three-qubit absorption refrigerator toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="flat key = value parameter file")
        p.add_argument("--mode", choices=MODES, default="delocalized")
        p.add_argument("--n", type=int, default=None, help="grid points or samples")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("-o", "--output", help="output path (default: stdout)")
        p.add_argument("--format", choices=("csv", "json"), default=None)
        if name == "bound-scan":
            p.add_argument("--ranges", choices=sorted(PRESETS), default="default")
            p.add_argument("--full-scale", action="store_true", help=f"use {FULL_SCALE_SAMPLES} samples")
    return parser


def _params(args):
    if not args.config:
        raise UsageError(f"{args.command} requires --config")
    try:
        return params_from_config(read_config(args.config))
    except OSError as exc:
        raise UsageError(f"cannot read config: {exc}") from exc


def _emit(args, header: dict, columns, rows) -> None:
    fmt = args.format or ("json" if args.output and args.output.endswith(".json") else "csv")
    if fmt == "csv":
        text = csv_text(columns, rows, header)
    else:
        text = dumps({"header": header, "columns": list(columns), "rows": [list(r) for r in rows]})
    if args.output:
        atomic_write(args.output, text)
    else:
        sys.stdout.write(text)


def _header(args, **resolved) -> dict:
    return {"command": args.command, "version": __version__, "mode": args.mode, **resolved}


def _characteristic(args):
    params = _params(args)
    n = args.n or DEFAULT_N["characteristic"]
    rows = performance_characteristic(params, n, args.mode)
    header = _header(args, n=n, params=params.to_dict())
    _emit(args, header, ("omega_c", "qdot_c_norm", "cop_ratio"), rows.tolist())


def _optimize(args):
    params = _params(args)
    n = args.n or DEFAULT_N["optimize"]
    opt = maximize_cooling_power(params, mode=args.mode, grid_size=n)
    d = asdict(opt)
    _emit(args, _header(args, n=n, params=params.to_dict()), list(d), [list(d.values())])


def _bound_scan(args):
    n = FULL_SCALE_SAMPLES if args.full_scale else (args.n or DEFAULT_N["bound-scan"])
    result = random_bound_scan(args.ranges, n, args.seed, mode=args.mode)
    rows = []
    for s in result.samples:
        p, o = s.params, s.optimum
        opt = (o.omega_c_star, o.qdot_c_max, o.cop_star, o.cop_ratio_star) if o else (float("nan"),) * 4
        rows.append((s.seed_index, p.omega_w, p.g, p.gamma, p.T_w, p.T_h, p.T_c) + opt)
    header = _header(args, n=n, seed=args.seed, ranges=result.summary["ranges"])
    summary = {k: v for k, v in result.summary.items() if k != "ranges"}
    _emit(args, header, SCAN_COLUMNS, rows)
    text = dumps({"header": header, "summary": summary})
    if args.output:
        atomic_write(args.output + ".summary.json", text)
        sys.stdout.write(text)
    else:
        # stdout already carries the sample table
        sys.stderr.write(text)


def _correlations(args):
    params = _params(args)
    n = args.n or DEFAULT_N["correlations"]
    sweep = correlation_sweep(params, n, args.mode)
    header = _header(args, n=n, params=params.to_dict(), omega_c_star=sweep.omega_c_star)
    _emit(args, header, sweep.columns, sweep.rows.tolist())


def _localized_asymptotics(args):
    params = _params(args)
    a = localized_asymptotics(params)
    d = {k: v for k, v in asdict(a).items() if k != "conditions_met"}
    d.update({f"condition_{k}": int(v) for k, v in a.conditions_met.items()})
    _emit(args, _header(args, params=params.to_dict()), list(d), [list(d.values())])


HANDLERS = {
    "characteristic": _characteristic,
    "optimize": _optimize,
    "bound-scan": _bound_scan,
    "correlations": _correlations,
    "localized-asymptotics": _localized_asymptotics,
}


def _fail(code: int, kind: str, message: str) -> int:
    sys.stderr.write(json.dumps({"error": kind, "message": message, "exit_code": code}) + "\n")
    return code


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.n is not None and args.n < 1:
        return _fail(2, "UsageError", "--n must be at least 1")
    try:
        HANDLERS[args.command](args)
    except (UsageError, ParameterError, OSError) as exc:
        return _fail(2, type(exc).__name__, str(exc))
    except QARError as exc:
        return _fail(1, type(exc).__name__, str(exc))
    except (ArithmeticError, ValueError, np.linalg.LinAlgError) as exc:
        return _fail(1, type(exc).__name__, str(exc))
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
