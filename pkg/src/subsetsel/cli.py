"""Command-line front end: dataset I/O, solver invocation, trace emission,
benchmark grids and the enumeration oracle.

Dataset CSV contract: header row with first column named ``y`` and feature
columns ``x1..xp``; UTF-8, '.' decimal, no missing values.  Solutions are
written as JSON with beta stored sparsely (index/value pairs); traces as CSV
with one row per outer step (or per iteration for the single-loop solvers).

Every run is reproducible from its flags: all timing fields are written as
0 unless --wall-clock on is passed, so identical invocations produce byte
identical files.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import json
import math
import sys
import time

import numpy as np

from . import __version__
from .baselines import cdss_solve, diht_solve, dual_ascent_solve
from .incremental import STOP_GAP_CONVERGED, STOP_MAX_OUTER, OuterConfig, solve
from .inner import STOP_GAP_EPS, STOP_MAX_ITERS, InnerConfig
from .losses import SquaredLoss
from .model import ProblemSpec
from .oracle import enumerate_solve
from .synth import SyntheticSpec, estimation_error, generate, standardize

TRACE_COLUMNS = [
    "step", "stage", "active_size", "reservoir_size", "screened",
    "primal", "dual", "gap", "radius", "time_ms",
]

CONVERGED_REASONS = {STOP_GAP_CONVERGED, STOP_GAP_EPS, "gap_change_leq_zeta", "gap_increasing"}
EXHAUSTED_REASONS = {STOP_MAX_OUTER, STOP_MAX_ITERS}


class DatasetFormatError(ValueError):
    """Malformed dataset CSV; the message names the offending line."""


def read_dataset(path: str) -> tuple[np.ndarray, np.ndarray]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DatasetFormatError("line 1: empty file") from None
        if not header or header[0] != "y":
            raise DatasetFormatError("line 1: first column must be named 'y'")
        p = len(header) - 1
        expected = ["y"] + [f"x{j}" for j in range(1, p + 1)]
        if header != expected:
            raise DatasetFormatError(
                f"line 1: expected columns y,x1..x{p}, got {','.join(header)}"
            )
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if len(row) != p + 1:
                raise DatasetFormatError(
                    f"line {lineno}: expected {p + 1} fields, got {len(row)}"
                )
            try:
                rows.append([float(v) for v in row])
            except ValueError as exc:
                raise DatasetFormatError(f"line {lineno}: {exc}") from None
    if not rows:
        raise DatasetFormatError("line 2: no data rows")
    data = np.asarray(rows)
    return data[:, 1:], data[:, 0]


def write_dataset(path: str, X: np.ndarray, y: np.ndarray) -> None:
    n, p = X.shape
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["y"] + [f"x{j}" for j in range(1, p + 1)])
        for i in range(n):
            writer.writerow([repr(float(y[i]))] + [repr(float(v)) for v in X[i]])


def _sha256(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _sparse_pairs(beta: np.ndarray) -> list:
    return [[int(j), float(beta[j])] for j in np.flatnonzero(beta)]


def _write_json(path: str, doc: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


def _exit_code(stop_reason: str) -> int:
    return 2 if stop_reason in EXHAUSTED_REASONS else 0


def _add_lambda_flags(sp):
    sp.add_argument("--lambda0", type=float, default=0.1, help="L0 weight")
    sp.add_argument("--lambda1", type=float, default=0.2, help="L1 weight")
    sp.add_argument("--lambda2", type=float, default=1.0, help="L2 weight (must be > 0)")


def _add_solver_flags(sp):
    _add_lambda_flags(sp)
    sp.add_argument("--algo", choices=["primdual", "dualast", "cdss", "diht"],
                    default="primdual")
    sp.add_argument("--k", type=int, default=None, help="sparsity level for diht")
    sp.add_argument("--step", type=float, default=5e-4, help="dual ascent step size")
    sp.add_argument("--eps", type=float, default=1e-6, help="duality gap threshold")
    sp.add_argument("--zeta", type=float, default=1e-6, help="gap-change threshold")
    sp.add_argument("--c", type=float, default=4.0, help="feature inclusion constant")
    sp.add_argument("--init-size", type=int, default=None,
                    help="initial active set size (default: one inclusion batch)")
    sp.add_argument("--max-inner", type=int, default=100_000)
    sp.add_argument("--max-outer", type=int, default=50)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--standardize", choices=["on", "off"], default="on")
    sp.add_argument("--log-base", choices=["e", "10", "2"], default="e")
    sp.add_argument("--wall-clock", choices=["on", "off"], default="off",
                    help="write real wall times (breaks byte-for-byte reproducibility)")


def _solve_one(X, y, args, trace_rows=None):
    """Run the selected solver; returns (solution, std_info, elapsed_ms)."""
    std_info = None
    if args.standardize == "on":
        X, y, std_info = standardize(X, y)
    problem = ProblemSpec(X, y, args.lambda0, args.lambda1, args.lambda2)
    inner = InnerConfig(step_size=args.step, eps=args.eps, zeta=args.zeta,
                        max_iters=args.max_inner)
    mu = SquaredLoss().mu

    def iter_cb(t, primal, dual, gap):
        if trace_rows is not None:
            stage = "sweep" if args.algo == "cdss" else "ascent"
            radius = math.sqrt(2.0 * max(gap, 0.0) / mu)
            trace_rows.append([t, stage, problem.p, 0, 0, primal, dual, gap, radius, 0.0])

    t0 = time.perf_counter()
    if args.algo == "primdual":
        cfg = OuterConfig(
            xi=args.eps, inclusion_c=args.c, init_size=args.init_size,
            max_outer=args.max_outer, inner=inner, log_base=args.log_base,
        )

        def outer_cb(rec):
            if trace_rows is not None:
                trace_rows.append([
                    rec.step, rec.stage, rec.active_size, rec.reservoir_size,
                    rec.screened_count, rec.primal, rec.dual, rec.gap, rec.radius,
                    rec.wall_time_ms if args.wall_clock == "on" else 0.0,
                ])

        sol = solve(problem, cfg, trace_cb=outer_cb)
    elif args.algo == "dualast":
        sol = dual_ascent_solve(problem, inner, trace_cb=iter_cb)
    elif args.algo == "cdss":
        sol = cdss_solve(problem, eps=args.eps, zeta=args.zeta,
                         max_iters=args.max_inner, trace_cb=iter_cb)
    else:  # diht
        if args.k is None:
            raise SystemExit2("--algo diht requires --k")
        sol = diht_solve(problem, args.k, inner, trace_cb=iter_cb)
    elapsed_ms = (time.perf_counter() - t0) * 1e3
    return sol, std_info, elapsed_ms


class SystemExit2(Exception):
    """Usage error surfaced with exit code 1."""


def _write_trace(path: str, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(TRACE_COLUMNS)
        for row in rows:
            writer.writerow(
                [row[0], row[1], row[2], row[3], row[4]]
                + [repr(float(v)) for v in row[5:9]]
                + [repr(float(row[9]))]
            )


def cmd_solve(args) -> int:
    X, y = read_dataset(args.data)
    trace_rows = [] if args.trace else None
    sol, std_info, elapsed_ms = _solve_one(X, y, args, trace_rows)

    config = {
        "algo": args.algo, "lambda0": args.lambda0, "lambda1": args.lambda1,
        "lambda2": args.lambda2, "step": args.step, "eps": args.eps,
        "zeta": args.zeta, "c": args.c, "init_size": args.init_size,
        "k": args.k, "max_inner": args.max_inner, "max_outer": args.max_outer,
        "seed": args.seed, "standardize": args.standardize,
        "log_base": args.log_base,
    }
    solution = {
        "beta": _sparse_pairs(sol.beta),
        "support": [int(j) for j in sol.support],
        "nnz": int(sol.support.size),
        "primal": sol.primal,
        "dual": sol.dual,
        "gap": sol.gap,
        "radius": sol.radius,
        "stop_reason": sol.stop_reason,
        "inner_iterations": int(sol.inner_iterations),
        "coordinate_touches": int(sol.coordinate_touches),
    }
    if std_info is not None:
        beta_orig = std_info.beta_to_original(sol.beta)
        solution["beta_original_scale"] = _sparse_pairs(beta_orig)
        solution["intercept"] = std_info.intercept(sol.beta)
    doc = {
        "command": "solve",
        "version": __version__,
        "dataset": {
            "path": args.data,
            "sha256": _sha256(args.data),
            "n": int(X.shape[0]),
            "p": int(X.shape[1]),
        },
        "config": config,
        "solution": solution,
        "wall_time_ms": elapsed_ms if args.wall_clock == "on" else 0.0,
    }
    if args.out:
        _write_json(args.out, doc)
    else:
        json.dump(doc, sys.stdout, indent=2)
        sys.stdout.write("\n")
    if args.trace:
        _write_trace(args.trace, trace_rows)
    return _exit_code(sol.stop_reason)


def cmd_simulate(args) -> int:
    spec = SyntheticSpec(
        n=args.n, p=args.p, rho=args.rho, support_frac=args.sparsity,
        snr=args.snr, coef_low=args.coef_low, coef_high=args.coef_high,
        coef_floor=args.coef_floor, seed=args.seed,
    )
    ds = generate(spec)
    write_dataset(args.out, ds.X, ds.y)
    truth = {
        "beta_true": _sparse_pairs(ds.beta_true),
        "support": [int(j) for j in ds.support],
        "noise_sigma": ds.noise_sigma,
        "seed": args.seed,
        "n": args.n, "p": args.p, "rho": args.rho, "snr": args.snr,
        "support_frac": args.sparsity,
        "coef_low": args.coef_low, "coef_high": args.coef_high,
        "coef_floor": args.coef_floor,
    }
    _write_json(args.out + ".truth.json", truth)
    return 0


def cmd_bench(args) -> int:
    n_grid = [int(v) for v in args.n.split(",")]
    snr_grid = [float(v) for v in args.snr.split(",")]
    algos = args.algos.split(",")
    for algo in algos:
        if algo not in ("primdual", "dualast", "cdss", "diht"):
            raise SystemExit2(f"unknown algo {algo!r}")
    if "diht" in algos and args.k is None:
        raise SystemExit2("--algo diht requires --k")

    rows = []
    for n in n_grid:
        for snr in snr_grid:
            for rep in range(args.replicates):
                spec = SyntheticSpec(
                    n=n, p=args.p, rho=args.rho, support_frac=args.sparsity,
                    snr=snr, coef_low=args.coef_low, coef_high=args.coef_high,
                    coef_floor=args.coef_floor, seed=args.seed + rep,
                )
                ds = generate(spec)
                true_support = set(ds.support.tolist())
                for algo in algos:
                    run_args = argparse.Namespace(**vars(args))
                    run_args.algo = algo
                    sol, std_info, elapsed_ms = _solve_one(ds.X, ds.y, run_args)
                    beta = (
                        std_info.beta_to_original(sol.beta)
                        if std_info is not None else sol.beta
                    )
                    rows.append([
                        n, args.p, repr(snr), algo, rep,
                        repr(elapsed_ms if args.wall_clock == "on" else 0.0),
                        repr(sol.gap),
                        int(sol.support.size),
                        int(set(sol.support.tolist()) == true_support),
                        repr(estimation_error(beta, ds.beta_true)),
                    ])
    with open(args.out, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow([
            "n", "p", "snr", "algo", "replicate", "time_ms", "gap",
            "nnz", "support_exact", "est_error",
        ])
        writer.writerows(rows)
    return 0


def cmd_oracle(args) -> int:
    X, y = read_dataset(args.data)
    if X.shape[1] > 14:
        raise SystemExit2(
            f"oracle enumeration refused: p={X.shape[1]} exceeds 14 (cost 2^p)"
        )
    std_info = None
    if args.standardize == "on":
        X, y, std_info = standardize(X, y)
    problem = ProblemSpec(X, y, args.lambda0, args.lambda1, args.lambda2)
    t0 = time.perf_counter()
    res = enumerate_solve(problem)
    elapsed_ms = (time.perf_counter() - t0) * 1e3
    doc = {
        "command": "oracle",
        "version": __version__,
        "dataset": {
            "path": args.data,
            "sha256": _sha256(args.data),
            "n": int(X.shape[0]),
            "p": int(X.shape[1]),
        },
        "config": {
            "lambda0": args.lambda0, "lambda1": args.lambda1,
            "lambda2": args.lambda2, "standardize": args.standardize,
        },
        "oracle": {
            "best_objective": res.best_objective,
            "best_support": [int(j) for j in res.best_support],
            "best_beta": _sparse_pairs(res.best_beta),
            "supports_evaluated": res.supports_evaluated,
        },
        "wall_time_ms": elapsed_ms if args.wall_clock == "on" else 0.0,
    }
    if args.out:
        _write_json(args.out, doc)
    else:
        json.dump(doc, sys.stdout, indent=2)
        sys.stdout.write("\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="subsetsel",
        description="Best-subset-selection solvers with gap-safe screening",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("solve", help="solve a dataset with one of the solvers")
    sp.add_argument("--data", required=True)
    sp.add_argument("--out", default=None, help="solution JSON path (default: stdout)")
    sp.add_argument("--trace", default=None, help="trace CSV path")
    _add_solver_flags(sp)
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("simulate", help="generate a synthetic dataset CSV")
    sp.add_argument("--out", required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--rho", type=float, default=0.4)
    sp.add_argument("--snr", type=float, default=20.0)
    sp.add_argument("--sparsity", type=float, default=0.03,
                    help="fraction of nonzero true coefficients")
    sp.add_argument("--coef-low", type=float, default=-1.0)
    sp.add_argument("--coef-high", type=float, default=1.0)
    sp.add_argument("--coef-floor", type=float, default=0.1)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("bench", help="grid of synthetic runs, one CSV row per run")
    sp.add_argument("--out", required=True)
    sp.add_argument("--n", required=True, help="comma-separated sample sizes")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--snr", default="20", help="comma-separated SNR values")
    sp.add_argument("--algos", default="primdual",
                    help="comma-separated: primdual,dualast,cdss,diht")
    sp.add_argument("--replicates", type=int, default=1)
    sp.add_argument("--rho", type=float, default=0.4)
    sp.add_argument("--sparsity", type=float, default=0.03)
    sp.add_argument("--coef-low", type=float, default=-1.0)
    sp.add_argument("--coef-high", type=float, default=1.0)
    sp.add_argument("--coef-floor", type=float, default=0.1)
    _add_solver_flags(sp)
    sp.set_defaults(func=cmd_bench)

    sp = sub.add_parser("oracle", help="exhaustive support enumeration (p <= 14)")
    sp.add_argument("--data", required=True)
    sp.add_argument("--out", default=None)
    _add_lambda_flags(sp)
    sp.add_argument("--standardize", choices=["on", "off"], default="on")
    sp.add_argument("--wall-clock", choices=["on", "off"], default="off")
    sp.set_defaults(func=cmd_oracle)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SystemExit2 as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (DatasetFormatError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    sys.exit(main())
