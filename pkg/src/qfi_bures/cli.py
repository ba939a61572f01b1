"""Command-line front end: point reports, parameter sweeps, verification.

Three subcommands share one model vocabulary (``builtin:NAME`` or a path
to a polynomial model JSON). ``compute`` prints a JSON point report,
``sweep`` prints a fixed-schema CSV over one parameter axis, ``verify``
runs the certification suites and exits nonzero when a check fails.
All numeric output uses 17 significant digits; identical invocations
produce byte-identical bytes. Exit codes: 0 success, 1 failed checks,
2 configuration or model errors (details as JSON on stderr).
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

import numpy as np

from . import jsonio, plotting, report
from .errors import QfiBuresError
from .models import BUILTIN_NAMES, load_model
from .tolerances import DEFAULT_TOL, Tolerances
from .verify import SUITES, run_suite


def _tolerances(args) -> Tolerances:
    rank_tol = getattr(args, "rank_tol", None)
    if rank_tol is None:
        return DEFAULT_TOL
    if not 0.0 < rank_tol < 1.0:
        raise ValueError(f"--rank-tol must be in (0, 1), got {rank_tol}")
    return dataclasses.replace(DEFAULT_TOL, rank=rank_tol)


def _parse_reals(text: str, flag: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip() != ""]
    except ValueError as exc:
        raise ValueError(f"{flag} expects comma-separated reals, got {text!r}"
                         ) from exc


def _emit(text: str, out) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _maybe_figure(args, fig_builder) -> None:
    path = getattr(args, "figure", None)
    if path:
        plotting.save_figure(fig_builder(), path)


def cmd_compute(args) -> int:
    tol = _tolerances(args)
    family = load_model(args.model, tol)
    x = (_parse_reals(args.x, "--x") if args.x is not None
         else [0.0] * family.param_count)
    rep = report.compute_report(family, x, eps=args.eps,
                                richardson=args.richardson,
                                n_expr=args.n_expr, tol=tol)
    if args.format == "json":
        _emit(jsonio.dumps(rep, indent=2) + "\n", args.out)
    else:
        lines = ["field,value"]
        lines += [f"{name},{value}" for name, value in report.flatten_report(rep)]
        _emit("\n".join(lines) + "\n", args.out)
    _maybe_figure(args, lambda: plotting.report_figure(rep))
    return 0


def cmd_sweep(args) -> int:
    tol = _tolerances(args)
    family = load_model(args.model, tol)
    bounds = _parse_reals(args.range, "--range")
    if len(bounds) != 2:
        raise ValueError(f"--range expects lo,hi, got {args.range!r}")
    base = _parse_reals(args.x, "--x") if args.x is not None else None
    rows = report.sweep_rows(family, axis=args.axis, lo=bounds[0],
                             hi=bounds[1], steps=args.steps, base=base,
                             eps=args.eps, richardson=args.richardson,
                             max_workers=args.jobs, tol=tol)
    if args.format == "csv":
        _emit("\n".join(report.sweep_csv_lines(rows)) + "\n", args.out)
    else:
        body = {"schema": report.SCHEMA_VERSION, "model": family.name,
                "axis": args.axis, "columns": list(report.SWEEP_COLUMNS),
                "rows": [list(row) for row in rows]}
        _emit(jsonio.dumps(body, indent=2) + "\n", args.out)
    _maybe_figure(args, lambda: plotting.sweep_figure(rows, family.name))
    return 0


def cmd_verify(args) -> int:
    tol = _tolerances(args)
    extra = []
    if args.model is not None:
        family = load_model(args.model, tol)
        # surface invalid models as a configuration error up front
        family.evaluate(np.zeros(family.param_count))
        extra.append(family)
    reports = run_suite(args.suite, args.seed, tol, extra_families=extra)
    all_pass = all(r.passed for r in reports)
    body = {"schema": report.SCHEMA_VERSION, "suite": args.suite,
            "seed": args.seed, "pass": all_pass,
            "checks": [r.to_json_dict() for r in reports]}
    _emit(jsonio.dumps(body, indent=2) + "\n", args.out)
    _maybe_figure(args, lambda: plotting.verify_figure(body))
    return 0 if all_pass else 1


def _add_model_flags(parser, default_model: str | None) -> None:
    parser.add_argument(
        "--model", default=default_model,
        help="builtin:NAME (%s) or a path to a model JSON file"
             % "|".join(BUILTIN_NAMES))
    parser.add_argument("--rank-tol", type=float, default=None, metavar="T",
                        help="relative eigenvalue threshold for the support "
                             "split (default %.0e)" % DEFAULT_TOL.rank)


def _add_scheme_flags(parser) -> None:
    parser.add_argument("--eps", type=float, default=1e-4,
                        help="finite-difference step (default 1e-4)")
    parser.add_argument("--richardson", default=True,
                        action=argparse.BooleanOptionalAction,
                        help="extrapolate the central metric estimate")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qfi-bures",
        description="Information-metric reports and numerical certification "
                    "for parametrized density matrices.")
    sub = parser.add_subparsers(dest="command", required=True)

    compute = sub.add_parser(
        "compute", help="report all metric quantities at one point")
    _add_model_flags(compute, "builtin:paper-example")
    compute.add_argument("--x", default=None,
                         help="comma-separated parameter values (default 0)")
    _add_scheme_flags(compute)
    compute.add_argument("--n-expr", type=int, default=1,
                         help="experiment count for the Cramer-Rao bound")
    compute.add_argument("--format", choices=("json", "csv"), default="json")
    compute.add_argument("--out", default="-", help="output path (- = stdout)")
    compute.add_argument("--figure", default=None, metavar="PATH",
                         help="also render the report as a figure file")
    compute.set_defaults(func=cmd_compute)

    sweep = sub.add_parser(
        "sweep", help="tabulate the quantities along one parameter axis")
    _add_model_flags(sweep, "builtin:paper-example")
    sweep.add_argument("--axis", type=int, default=0,
                       help="parameter index to sweep (default 0)")
    sweep.add_argument("--range", default="-0.5,0.5", metavar="LO,HI",
                       help="sweep interval (default -0.5,0.5)")
    sweep.add_argument("--steps", type=int, default=101,
                       help="grid size, at least 2 (default 101)")
    sweep.add_argument("--x", default=None,
                       help="base point for the non-swept parameters")
    _add_scheme_flags(sweep)
    sweep.add_argument("--jobs", type=int, default=None,
                       help="worker threads for the grid (default: auto)")
    sweep.add_argument("--format", choices=("csv", "json"), default="csv")
    sweep.add_argument("--out", default="-", help="output path (- = stdout)")
    sweep.add_argument("--figure", default=None, metavar="PATH",
                       help="also render the sweep as a figure file")
    sweep.set_defaults(func=cmd_sweep)

    verify = sub.add_parser(
        "verify", help="run the certification suites")
    verify.add_argument("--suite", default="all",
                        choices=SUITES + ("all",))
    verify.add_argument("--seed", type=int, default=0)
    _add_model_flags(verify, None)
    verify.add_argument("--out", default="-", help="output path (- = stdout)")
    verify.add_argument("--figure", default=None, metavar="PATH",
                        help="also render the residual ladders as a figure")
    verify.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (QfiBuresError, ValueError, KeyError, OSError) as exc:
        payload = {"error": {"type": type(exc).__name__, "message": str(exc)}}
        sys.stderr.write(jsonio.dumps(payload) + "\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
