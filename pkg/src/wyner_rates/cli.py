"""Command-line front end: single rates, parameter sweeps, figure datasets.

Output rows use the schema  scheme,dim,alpha,snr_db,rate,split  with the
rate printed to 12 decimals (so CSV values round-trip to the library output
well below 1e-9) and the optimal split, when present, as |-joined shares.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from .schemes import SCHEME_IDS, SchemeResult, evaluate_scheme
from .topology import CellArrayModel, Dimension, PowerSplit

_DIMS = {"1d": Dimension.LINE_1D, "2d": Dimension.HEX_2D}

# Figure datasets: (dimension, sweep variable, fixed value).
FIGURES = {
    "fig-1d-5db": ("1d", "alpha", 5.0),
    "fig-1d-10db": ("1d", "alpha", 10.0),
    "fig-2d-10db": ("2d", "alpha", 10.0),
    "fig-1d-alpha05": ("1d", "snr_db", 0.5),
    "fig-2d-alpha05": ("2d", "snr_db", 0.5),
}

EXIT_USAGE = 2
EXIT_OUTPUT = 3


def snr_db_to_power(snr_db: float) -> float:
    return 10.0 ** (snr_db / 10.0)


def _split_field(result: SchemeResult) -> str:
    split = result.optimal_split
    if split is None:
        return ""
    if isinstance(split, PowerSplit):
        parts = split.weights
    else:  # tuple of per-class PowerSplits (multi-layer)
        parts = [x for s in split for x in s.weights]
    return "|".join(f"{x:.6f}" for x in parts)


def _schemes_for(dim: str, requested) -> list:
    if requested:
        return list(requested)
    ids = list(SCHEME_IDS)
    if dim == "2d":
        ids.remove("overlap-full")
    return ids


def _grid(start: float, stop: float, step: float) -> list:
    if step <= 0:
        raise ValueError("step must be positive")
    n = int(round((stop - start) / step))
    pts = [start + i * step for i in range(n + 1)]
    return [p for p in pts if p <= stop + 1e-12]


def _evaluate_rows(schemes, dim, sweep_var, grid, fixed, layers):
    points = [(scheme, x) for scheme in schemes for x in grid]

    def one(point):
        scheme, x = point
        alpha, snr_db = (x, fixed) if sweep_var == "alpha" else (fixed, x)
        model = CellArrayModel(_DIMS[dim], alpha, snr_db_to_power(snr_db))
        result = evaluate_scheme(scheme, model, layers=layers)
        return {
            "scheme": scheme,
            "dim": dim,
            "alpha": f"{alpha:.6f}",
            "snr_db": f"{snr_db:.6f}",
            "rate": f"{result.rate:.12f}",
            "split": _split_field(result),
        }

    threads = max(1, int(os.environ.get("WYNER_RATES_THREADS", "1")))
    if threads == 1:
        return [one(p) for p in points]
    # Evaluations are pure; assembling in input order keeps output
    # deterministic regardless of scheduling.
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(one, points))


def _write_rows(rows, path, fmt):
    try:
        out = open(path, "w", newline="") if path else None
    except OSError as exc:
        print(f"cannot open output path: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_OUTPUT)
    stream = out or sys.stdout
    try:
        if fmt == "json":
            json.dump(rows, stream, indent=2)
            stream.write("\n")
        else:
            writer = csv.DictWriter(
                stream, fieldnames=["scheme", "dim", "alpha", "snr_db",
                                    "rate", "split"])
            writer.writeheader()
            writer.writerows(rows)
    finally:
        if out:
            out.close()


def cmd_rate(args) -> int:
    model = CellArrayModel(_DIMS[args.dim], args.alpha,
                           snr_db_to_power(args.snr_db))
    result = evaluate_scheme(args.scheme, model, layers=args.layers)
    line = (f"{args.scheme} dim={args.dim} alpha={args.alpha:g} "
            f"snr_db={args.snr_db:g} rate={result.rate:.6f}")
    split = _split_field(result)
    if split:
        line += f" split={split}"
    print(line)
    return 0


def cmd_sweep(args) -> int:
    grid = _grid(args.start, args.stop, args.step)
    if args.var == "alpha" and not all(0.0 <= x <= 1.0 for x in grid):
        print("alpha grid must stay within [0, 1]", file=sys.stderr)
        return EXIT_USAGE
    schemes = _schemes_for(args.dim, args.scheme)
    rows = _evaluate_rows(schemes, args.dim, args.var, grid, args.fixed,
                          args.layers)
    _write_rows(rows, args.output, args.format)
    return 0


def cmd_figure(args) -> int:
    dim, var, fixed = FIGURES[args.id]
    if var == "alpha":
        grid = _grid(0.0, 1.0, 0.01)
    else:
        grid = _grid(0.0, 25.0, 0.5)
    schemes = _schemes_for(dim, None)
    rows = _evaluate_rows(schemes, dim, var, grid, fixed, args.layers)
    _write_rows(rows, args.output, args.format)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wyner-rates",
        description="Per-cell uplink rates of collaboration schemes on "
                    "Wyner cellular models.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--layers", type=int, default=4,
                       help="layer count for the multilayer scheme")
        p.add_argument("--output", "-o", default=None,
                       help="output path (default stdout)")
        p.add_argument("--format", choices=["csv", "json"], default="csv")

    p_rate = sub.add_parser("rate", help="one scheme at one operating point")
    p_rate.add_argument("--scheme", required=True, choices=SCHEME_IDS)
    p_rate.add_argument("--dim", required=True, choices=["1d", "2d"])
    p_rate.add_argument("--alpha", required=True, type=float)
    p_rate.add_argument("--snr-db", required=True, type=float, dest="snr_db")
    p_rate.add_argument("--layers", type=int, default=4)
    p_rate.set_defaults(func=cmd_rate)

    p_sweep = sub.add_parser("sweep", help="rates over a parameter grid")
    p_sweep.add_argument("--scheme", action="append", choices=SCHEME_IDS,
                         help="repeatable; default is all applicable schemes")
    p_sweep.add_argument("--dim", required=True, choices=["1d", "2d"])
    p_sweep.add_argument("--var", required=True, choices=["alpha", "snr_db"])
    p_sweep.add_argument("--start", required=True, type=float)
    p_sweep.add_argument("--stop", required=True, type=float)
    p_sweep.add_argument("--step", required=True, type=float)
    p_sweep.add_argument("--fixed", required=True, type=float,
                         help="value of the non-swept variable")
    common(p_sweep)
    p_sweep.set_defaults(func=cmd_sweep)

    p_fig = sub.add_parser("figure", help="named comparison dataset")
    p_fig.add_argument("--id", required=True, choices=sorted(FIGURES))
    common(p_fig)
    p_fig.set_defaults(func=cmd_figure)
    return parser


def main(argv=None) -> int:
    os.environ.setdefault("WYNER_RATES_THREADS", "1")
    parser = build_parser()
    args = parser.parse_args(argv)
    if hasattr(args, "alpha") and not 0.0 <= args.alpha <= 1.0:
        print(f"alpha must lie in [0, 1], got {args.alpha}", file=sys.stderr)
        return EXIT_USAGE
    if getattr(args, "step", 1.0) <= 0:
        print("step must be positive", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except ValueError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
