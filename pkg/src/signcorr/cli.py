"""Command-line interface.

Subcommands
-----------
estimate   correlation matrix of a CSV dataset (rows = observations)
eigenmap   evaluate or invert the eigenvalue map on a given spectrum
simulate   Monte Carlo variance study, emitted as CSV
figure     eigenvalue-scenario tables (index, lambda, delta) as CSV

Exit codes: 0 success, 2 usage or input error, 3 numeric/estimation
failure, 4 internal invariant violation.
"""

import argparse
import csv
import json
import os
import sys

import numpy as np

from . import correlation, eigenmap, simulation
from .exceptions import InvalidInputError, SignCorrError
from .linalg import sym_eigen

_METHODS = ("moment", "pairwise", "multivariate", "two-stage")


class _InputError(Exception):
    """Input/usage problem detected after argument parsing (exit 2)."""


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _read_data_csv(path):
    """Parse a CSV of observations; auto-detect an optional header row.

    Returns an (n, p) float array. Malformed fields are reported with their
    line number.
    """
    if not os.path.exists(path):
        raise _InputError(f"input file not found: {path}")
    if not os.access(path, os.R_OK):
        raise _InputError(f"input file not readable: {path}")
    rows, width = [], None
    with open(path, newline="") as fh:
        for lineno, record in enumerate(csv.reader(fh), start=1):
            if not record or all(f.strip() == "" for f in record):
                continue
            if width is None:
                width = len(record)
                try:
                    rows.append([float(f) for f in record])
                    continue
                except ValueError:
                    continue  # header row
            if len(record) != width:
                raise _InputError(
                    f"line {lineno}: expected {width} fields, got {len(record)}"
                )
            try:
                rows.append([float(f) for f in record])
            except ValueError as exc:
                raise _InputError(f"line {lineno}: {exc}") from exc
    if not rows:
        raise _InputError(f"no data rows in {path}")
    return np.array(rows, dtype=float)


def _check_writable(path):
    if path is None:
        return
    parent = os.path.dirname(os.path.abspath(path))
    if not os.path.isdir(parent) or not os.access(parent, os.W_OK):
        raise _InputError(f"output location not writable: {path}")


def _emit(text: str, path):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _matrix_csv_rows(m) -> str:
    return "\n".join(",".join(_fmt(v) for v in row) for row in m) + "\n"


def _estimate_report(args, payload) -> str:
    if args.format == "json":
        return json.dumps(payload, indent=2) + "\n"
    parts = ["# correlation\n", _matrix_csv_rows(payload["correlation"])]
    if "shape" in payload:
        parts += ["# shape\n", _matrix_csv_rows(payload["shape"])]
    if "lambdas" in payload:
        parts += ["# lambdas\n", ",".join(_fmt(v) for v in payload["lambdas"]) + "\n"]
    if "ci" in payload:
        ci = payload["ci"]
        parts += ["# ci\n", f"{_fmt(ci['lower'])},{_fmt(ci['upper'])},{_fmt(ci['level'])}\n"]
    return "".join(parts)


def cmd_estimate(args) -> int:
    _check_writable(args.output)
    data = _read_data_csv(args.input)
    n, p = data.shape
    method = args.method
    if args.ci is not None:
        if method != "two-stage":
            raise _InputError("--ci is only available for the two-stage method")
        if not (0.0 < args.ci < 1.0):
            raise _InputError(f"--ci level must lie in (0, 1), got {args.ci}")

    payload = {"method": method.replace("-", "_"), "p": int(p), "n": int(n)}
    if method == "two-stage":
        if p != 2:
            raise _InputError(f"two-stage estimation requires 2 columns, got {p}")
        est = correlation.sscor_two_stage(data)
        payload["correlation"] = [[1.0, est.rho], [est.rho, 1.0]]
        if args.ci is not None:
            ci = correlation.confidence_interval(est, args.ci)
            payload["ci"] = {"lower": ci.lower, "upper": ci.upper, "level": ci.level}
    else:
        func = {
            "moment": correlation.moment_matrix,
            "pairwise": correlation.pairwise_matrix,
            "multivariate": correlation.multivariate_matrix,
        }[method]
        est = func(data)
        payload["correlation"] = est.matrix.tolist()
        if est.shape_estimate is not None:
            payload["shape"] = est.shape_estimate.tolist()
            payload["lambdas"] = sym_eigen(est.shape_estimate).eigenvalues.tolist()
    _emit(_estimate_report(args, payload), args.output)
    return 0


def _parse_spectrum(text: str) -> np.ndarray:
    try:
        values = np.array([float(f) for f in text.split(",")], dtype=float)
    except ValueError as exc:
        raise _InputError(f"invalid spectrum: {exc}") from exc
    if values.size < 2:
        raise _InputError("spectrum needs at least 2 values")
    if not np.all(np.isfinite(values)):
        raise _InputError("spectrum values must be finite")
    if np.any(values < 0.0):
        raise _InputError("spectrum values must be nonnegative")
    total = values.sum()
    if total <= 0.0:
        raise _InputError("spectrum must have a positive sum")
    if abs(total - 1.0) > 1e-9:
        print(
            f"warning: spectrum sums to {total:.17g}; normalizing",
            file=sys.stderr,
        )
        values = values / total
    return values


def cmd_eigenmap(args) -> int:
    if args.direction == "forward":
        if args.lambdas is None:
            raise _InputError("eigenmap forward requires --lambdas")
        out = eigenmap.forward(_parse_spectrum(args.lambdas))
    else:
        if args.deltas is None:
            raise _InputError("eigenmap inverse requires --deltas")
        result = eigenmap.inverse_full(_parse_spectrum(args.deltas))
        print(
            f"iterations={result.iterations} residual={result.residual:.3e}",
            file=sys.stderr,
        )
        out = result.spectrum
    print(",".join(_fmt(v) for v in out))
    return 0


def _thread_count(args) -> int:
    if args.threads is not None:
        return args.threads
    env = os.environ.get("SIGNCORR_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError as exc:
            raise _InputError(f"SIGNCORR_THREADS must be an integer: {env!r}") from exc
    return 1


def cmd_simulate(args) -> int:
    cfg = simulation.ExperimentConfig(
        family=args.dist, p=args.p, n=args.n, reps=args.reps, seed=args.seed
    )
    result = simulation.run_experiment(cfg, threads=_thread_count(args))
    sys.stdout.write(simulation.result_to_csv(result))
    return 0


def cmd_figure(args) -> int:
    kind = "equidistant" if args.figure == 1 else "spiked"
    sys.stdout.write(simulation.figure_to_csv(simulation.figure_table(kind, args.p)))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="signcorr",
        description="Robust correlation estimation from spatial signs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    est = sub.add_parser("estimate", help="estimate a correlation matrix from CSV data")
    est.add_argument("--method", choices=_METHODS, required=True)
    est.add_argument("--input", required=True, help="CSV file, rows = observations")
    est.add_argument("--ci", type=float, default=None, metavar="LEVEL",
                     help="confidence level for the two-stage method (p=2)")
    est.add_argument("--format", choices=("csv", "json"), default="csv")
    est.add_argument("--output", default=None, help="write report here instead of stdout")
    est.set_defaults(func=cmd_estimate)

    eig = sub.add_parser("eigenmap", help="evaluate or invert the eigenvalue map")
    eig.add_argument("direction", choices=("forward", "inverse"))
    eig.add_argument("--lambdas", default=None, help="comma-separated shape eigenvalues")
    eig.add_argument("--deltas", default=None, help="comma-separated sign eigenvalues")
    eig.set_defaults(func=cmd_eigenmap)

    sim = sub.add_parser("simulate", help="Monte Carlo variance study (CSV to stdout)")
    sim.add_argument("--dist", choices=tuple(simulation.FAMILY_TAGS), required=True)
    sim.add_argument("--p", type=int, required=True)
    sim.add_argument("--n", type=int, required=True)
    sim.add_argument("--reps", type=int, required=True)
    sim.add_argument("--seed", type=int, required=True)
    sim.add_argument("--threads", type=int, default=None,
                     help="worker threads (default: SIGNCORR_THREADS or 1)")
    sim.set_defaults(func=cmd_simulate)

    fig = sub.add_parser("figure", help="eigenvalue scenario table (CSV to stdout)")
    fig.add_argument("--figure", type=int, choices=(1, 2), required=True)
    fig.add_argument("--p", type=int, required=True)
    fig.set_defaults(func=cmd_figure)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (_InputError, InvalidInputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SignCorrError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {exc}", file=sys.stderr)
        return 4


def run() -> None:
    sys.exit(main())
