"""Point reports and sweep assembly shared by the CLI output paths.

A point report aggregates the quantities the front end prints for one
parameter value: the information matrix, both discretized metrics scaled
by four, the rank-change correction, the residual of the forward-metric
identity, and the Cramer-Rao bound. Sweeps evaluate the same quantities
directionally along one parameter axis over a uniform grid; rows are
computed fully (in parallel, ordered by grid index) before anything is
written, so a failure never leaves a truncated table behind.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .correction import correction_matrix, kernel_hessian_correction
from .metrics import (CrbReport, bures_metric_central, bures_metric_forward,
                      crb, metric_matrix, qfi_directional, qfi_matrix)
from .models import StateFamily, as_parameter_vector
from .tolerances import DEFAULT_TOL, Tolerances

SCHEMA_VERSION = 1

# Fixed sweep column schema; tests pin this header verbatim. For models
# with several parameters the scalar columns are the quantities along the
# swept axis direction only.
SWEEP_COLUMNS = ("index", "x", "qfi", "forward_times4", "central_times4",
                 "correction", "eq5_residual", "theorem1_gap", "rank")


def _real_rows(matrix: np.ndarray) -> list:
    return [[float(v) for v in row] for row in np.asarray(matrix, dtype=float)]


def crb_to_json(report: CrbReport) -> dict:
    out: dict = {"n_expr": report.n_expr, "unbounded": report.unbounded,
                 "scalar_bound": report.scalar_bound}
    out["bound_matrix"] = (None if report.bound_matrix is None
                           else _real_rows(report.bound_matrix))
    out["null_space"] = (None if report.null_space is None
                         else _real_rows(report.null_space))
    return out


def compute_report(family: StateFamily, x, eps: float = 1e-4,
                   richardson: bool = True, n_expr: int = 1,
                   tol: Tolerances = DEFAULT_TOL) -> dict:
    """Full metric report at one parameter point, JSON-ready.

    ``eq5_residual`` and ``theorem1_gap`` are max-abs entries of the
    matrix identities 4g = F + correction and 4h = F. The rank threshold
    that decided the support split is reported next to the correction, as
    the split is tolerance-dependent for near-singular spectra.
    """
    vec = as_parameter_vector(x, family.param_count)
    state = family.evaluate(vec)
    eigenvalues = state.spectrum.eigenvalues
    threshold = tol.rank * max(1.0, float(eigenvalues.max(initial=0.0)))
    qfi = qfi_matrix(family, vec, tol)
    forward4 = 4.0 * metric_matrix(family, vec, scheme="forward", eps=eps,
                                   tol=tol)
    central4 = 4.0 * metric_matrix(family, vec, scheme="central", eps=eps,
                                   richardson=richardson, tol=tol)
    corr = correction_matrix(family, vec, tol)
    return {
        "schema": SCHEMA_VERSION,
        "model": family.name,
        "x": [float(v) for v in vec],
        "eps": eps,
        "richardson": bool(richardson),
        "dim": family.dim,
        "rank": state.spectrum.rank,
        "rank_threshold": threshold,
        "eigenvalues": [float(v) for v in eigenvalues],
        "qfi": _real_rows(qfi),
        "forward_times4": _real_rows(forward4),
        "central_times4": _real_rows(central4),
        "correction": _real_rows(corr),
        "eq5_residual": float(np.abs(forward4 - qfi - corr).max()),
        "theorem1_gap": float(np.abs(central4 - qfi).max()),
        "crb": crb_to_json(crb(qfi, n_expr=n_expr, tol=tol)),
    }


def flatten_report(report: dict) -> list[tuple[str, str]]:
    """(field, value) rows for the delimited rendering of a point report.

    Matrices flatten entry-wise with suffixed names (``qfi_01`` is row 0,
    column 1); the Cramer-Rao block keeps its prefix. Order follows the
    JSON report.
    """
    rows: list[tuple[str, str]] = []

    def emit(name, value) -> None:
        if isinstance(value, dict):
            for key, sub in value.items():
                emit(f"{name}_{key}", sub)
        elif isinstance(value, (list, tuple)):
            first = value[0] if value else None
            if isinstance(first, (list, tuple)):
                for i, row in enumerate(value):
                    for j, entry in enumerate(row):
                        emit(f"{name}_{i}{j}", entry)
            else:
                for i, entry in enumerate(value):
                    emit(f"{name}_{i}", entry)
        else:
            rows.append((name, format_cell(value)))

    for key, value in report.items():
        emit(key, value)
    return rows


def format_cell(value) -> str:
    """Delimited-output cell: round-trip floats, bare ints and strings."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        v = float(value)
        if v == int(v) and abs(v) < 1e16:
            return f"{v:.1f}"
        return format(v, ".17g")
    return str(value)


def sweep_grid(lo: float, hi: float, steps: int) -> np.ndarray:
    if steps < 2:
        raise ValueError(f"sweep needs at least 2 steps, got {steps}")
    if not lo < hi:
        raise ValueError(f"sweep range must satisfy lo < hi, got [{lo}, {hi}]")
    return np.linspace(lo, hi, steps)


def sweep_row(family: StateFamily, index: int, vec: np.ndarray, axis: int,
              eps: float, richardson: bool,
              tol: Tolerances = DEFAULT_TOL) -> tuple:
    direction = np.zeros(family.param_count)
    direction[axis] = 1.0
    qfi = qfi_directional(family, vec, direction, tol)
    forward4 = 4.0 * bures_metric_forward(family, vec, direction, eps, tol).value
    central4 = 4.0 * bures_metric_central(family, vec, direction, eps,
                                          richardson, tol).value
    corr = kernel_hessian_correction(family, vec, direction, tol)
    rank = family.evaluate(vec).spectrum.rank
    return (index, float(vec[axis]), qfi, forward4, central4, corr,
            abs(forward4 - qfi - corr), abs(central4 - qfi), rank)


def sweep_rows(family: StateFamily, axis: int, lo: float, hi: float,
               steps: int, base=None, eps: float = 1e-4,
               richardson: bool = True, max_workers: int | None = None,
               tol: Tolerances = DEFAULT_TOL) -> list[tuple]:
    """Evaluate the sweep grid; all rows or nothing.

    Rows are computed concurrently but returned ordered by grid index, so
    repeated invocations produce identical output. Any failure aborts the
    whole sweep with the offending grid point named.
    """
    if not 0 <= axis < family.param_count:
        raise ValueError(
            f"axis {axis} out of range for {family.param_count} parameter(s)")
    if base is None:
        base_vec = np.zeros(family.param_count)
    else:
        base_vec = as_parameter_vector(base, family.param_count)
    grid = sweep_grid(lo, hi, steps)

    points = []
    for value in grid:
        vec = base_vec.copy()
        vec[axis] = value
        points.append(vec)
    for index, vec in enumerate(points):
        # fail before any work if some grid point leaves the model domain
        try:
            family.require_interior(vec, margin=eps)
        except Exception as exc:
            raise type(exc)(
                f"sweep aborted at grid index {index}, x = {vec.tolist()}: "
                f"{exc}") from exc

    def task(item):
        index, vec = item
        try:
            return sweep_row(family, index, vec, axis, eps, richardson, tol)
        except Exception as exc:
            raise type(exc)(
                f"sweep aborted at grid index {index}, x = {vec.tolist()}: "
                f"{exc}") from exc

    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        return list(pool.map(task, enumerate(points)))


def sweep_csv_lines(rows) -> list[str]:
    lines = [",".join(SWEEP_COLUMNS)]
    for row in rows:
        lines.append(",".join(format_cell(v) for v in row))
    return lines
