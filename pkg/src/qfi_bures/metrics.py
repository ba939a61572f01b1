"""Fidelity, Bures distances, QFI matrices and finite-step Bures metrics.

The spectral QFI formula and the finite-step metrics live side by side
here because certifying their relationship is the point of the package:
the centered metric times four converges to the QFI quadratic form
everywhere, while the forward metric picks up an extra term at
rank-changing points (see the correction module).

Fidelity uses trace_norm(sqrt(rho1) @ sqrt(rho2)), algebraically equal to
the textbook Tr sqrt(sqrt(rho1) rho2 sqrt(rho1)) but symmetric in the
arguments and one nested square root cheaper. Squared Bures distance is
2*(1 - fidelity).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ShapeMismatch, StepTooSmall
from .linalg import DensityMatrix, Spectrum, trace_norm
from .models import StateFamily, as_parameter_vector
from .tolerances import DEFAULT_TOL, Tolerances

METRIC_SCHEMES = ("forward", "central")


def fidelity(rho1: DensityMatrix, rho2: DensityMatrix) -> float:
    """Uhlmann fidelity of two density matrices, clamped into [0, 1]."""
    if rho1.dim != rho2.dim:
        raise ShapeMismatch(f"dimension mismatch: {rho1.dim} vs {rho2.dim}")
    value = trace_norm(rho1.sqrt() @ rho2.sqrt())
    # mathematically <= 1; rounding and the trace window can overshoot by ~1e-10
    return min(max(value, 0.0), 1.0)


def bures_distance_squared(rho1: DensityMatrix, rho2: DensityMatrix) -> float:
    return max(2.0 * (1.0 - fidelity(rho1, rho2)), 0.0)


def bures_distance(rho1: DensityMatrix, rho2: DensityMatrix) -> float:
    return float(np.sqrt(bures_distance_squared(rho1, rho2)))


# ---------------------------------------------------------------------------
# QFI


def qfi_from_spectrum(spectrum: Spectrum, derivatives,
                      tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """QFI matrix from an eigendecomposition and per-parameter derivatives.

    Entry (i, j) is 2 sum Re[<k|d_i rho|l><l|d_j rho|k>] / (lambda_k +
    lambda_l) over eigenvalue pairs with lambda_k + lambda_l above the
    relative rank threshold. Invariant under the eigenvector gauge freedom
    inside degenerate eigenspaces, since those rotations act unitarily on
    both factors of each term.
    """
    vals = spectrum.eigenvalues
    vecs = spectrum.eigenvectors
    threshold = tol.rank * max(float(vals[0]) if len(vals) else 0.0, 1.0)
    denom = vals[:, None] + vals[None, :]
    mask = denom > threshold
    safe = np.where(mask, denom, 1.0)
    params = len(derivatives)
    reduced = [vecs.conj().T @ np.asarray(d, dtype=complex) @ vecs
               for d in derivatives]
    out = np.zeros((params, params))
    for i in range(params):
        for j in range(i, params):
            # d_j is Hermitian, so <l|d_j|k> = conj(<k|d_j|l>)
            terms = (reduced[i] * np.conj(reduced[j])).real
            value = 2.0 * float(np.sum(np.where(mask, terms / safe, 0.0)))
            out[i, j] = value
            out[j, i] = value
    return out


def qfi_matrix(family: StateFamily, x, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """QFI matrix of a family at a parameter point (symmetric PSD, P x P)."""
    vec = as_parameter_vector(x, family.param_count)
    state = family.evaluate(vec)
    derivatives = [family.derivative(vec, i) for i in range(family.param_count)]
    return qfi_from_spectrum(state.spectrum, derivatives, tol)


def qfi_directional(family: StateFamily, x, y,
                    tol: Tolerances = DEFAULT_TOL) -> float:
    """Quadratic form y^T F y of the QFI matrix along direction y."""
    direction = as_parameter_vector(y, family.param_count)
    matrix = qfi_matrix(family, x, tol)
    return float(direction @ matrix @ direction)


# ---------------------------------------------------------------------------
# finite-step Bures metrics


@dataclass(frozen=True)
class MetricEstimate:
    """One finite-step metric value: d_B^2 between probe states over eps^2."""

    value: float
    step: float
    richardson_used: bool
    scheme: str


def _check_step(eps: float, tol: Tolerances) -> None:
    if eps <= 0:
        raise StepTooSmall(f"step must be positive, got {eps!r}")
    if eps < tol.eps_floor:
        raise StepTooSmall(
            f"step {eps:.3e} below the roundoff floor {tol.eps_floor:.1e}; "
            "squared-distance differences would be noise-dominated"
        )


def _central_value(family: StateFamily, vec, direction, eps: float) -> float:
    lo = family.evaluate(vec - 0.5 * eps * direction)
    hi = family.evaluate(vec + 0.5 * eps * direction)
    return bures_distance_squared(lo, hi) / (eps * eps)


def bures_metric_central(family: StateFamily, x, y, eps: float = 1e-4,
                         richardson: bool = True,
                         tol: Tolerances = DEFAULT_TOL) -> MetricEstimate:
    """Centered-step metric d_B^2(rho(x - eps y/2), rho(x + eps y/2))/eps^2.

    The centered probe pair is symmetric under eps -> -eps, so the error
    expansion is even in eps and two-point Richardson (4 v(eps/2) -
    v(eps))/3 cancels the leading eps^2 term.
    """
    _check_step(eps, tol)
    vec = as_parameter_vector(x, family.param_count)
    direction = as_parameter_vector(y, family.param_count)
    margin = 0.5 * eps * float(np.abs(direction).max(initial=0.0))
    family.require_interior(vec, margin)
    value = _central_value(family, vec, direction, eps)
    if richardson:
        value = (4.0 * _central_value(family, vec, direction, 0.5 * eps) - value) / 3.0
    return MetricEstimate(value=value, step=eps, richardson_used=richardson,
                          scheme="central")


def bures_metric_forward(family: StateFamily, x, y, eps: float = 1e-4,
                         tol: Tolerances = DEFAULT_TOL) -> MetricEstimate:
    """Forward-step metric d_B^2(rho(x), rho(x + eps y))/eps^2.

    No extrapolation: at rank-changing points the error is genuinely
    O(eps), so Richardson would cancel nothing and suggest false accuracy.
    """
    _check_step(eps, tol)
    vec = as_parameter_vector(x, family.param_count)
    direction = as_parameter_vector(y, family.param_count)
    margin = eps * float(np.abs(direction).max(initial=0.0))
    family.require_interior(vec, margin)
    base = family.evaluate(vec)
    shifted = family.evaluate(vec + eps * direction)
    value = bures_distance_squared(base, shifted) / (eps * eps)
    return MetricEstimate(value=value, step=eps, richardson_used=False,
                          scheme="forward")


def directional_metric(family: StateFamily, x, y, scheme: str,
                       eps: float = 1e-4, richardson: bool = True,
                       tol: Tolerances = DEFAULT_TOL) -> MetricEstimate:
    if scheme == "central":
        return bures_metric_central(family, x, y, eps, richardson, tol)
    if scheme == "forward":
        return bures_metric_forward(family, x, y, eps, tol)
    raise ValueError(f"unknown scheme {scheme!r}; expected one of {METRIC_SCHEMES}")


def metric_matrix(family: StateFamily, x, scheme: str = "central",
                  eps: float = 1e-4, richardson: bool = True,
                  tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Full P x P metric by polarization of the directional quadratic form.

    Diagonal entries probe the coordinate directions; off-diagonal entries
    use [q(e_i + e_j) - q(e_i - e_j)]/4, exact for quadratic forms.
    """

    def probe(y) -> float:
        return directional_metric(family, x, y, scheme, eps, richardson, tol).value

    params = family.param_count
    out = np.zeros((params, params))
    for i in range(params):
        e_i = np.zeros(params)
        e_i[i] = 1.0
        out[i, i] = probe(e_i)
        for j in range(i + 1, params):
            e_j = np.zeros(params)
            e_j[j] = 1.0
            value = (probe(e_i + e_j) - probe(e_i - e_j)) / 4.0
            out[i, j] = value
            out[j, i] = value
    return out


# ---------------------------------------------------------------------------
# Cramer-Rao reporting


@dataclass(frozen=True)
class CrbReport:
    """Cramer-Rao lower bound derived from a QFI matrix.

    ``unbounded`` flags a singular (or numerically near-singular) QFI:
    variance along ``null_space`` directions is not bounded by the QFI at
    all, which rank-changing families exhibit at the rank change. Flagged
    rather than raised; exposing the singularity is part of the job.
    """

    n_expr: int
    unbounded: bool
    scalar_bound: float | None = None
    bound_matrix: np.ndarray | None = None
    null_space: np.ndarray | None = None


def crb(qfi: np.ndarray, n_expr: int = 1,
        tol: Tolerances = DEFAULT_TOL) -> CrbReport:
    """Lower bound on estimator covariance: F^{-1}/n, or 1/(n F) for P = 1.

    Directions whose eigenvalue falls below lambda_max/cond_max (or below
    zero) are reported as unbounded with the offending eigenvector basis.
    """
    if n_expr < 1:
        raise ValueError(f"n_expr must be >= 1, got {n_expr}")
    matrix = np.asarray(qfi, dtype=float)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ShapeMismatch(f"QFI matrix must be square, got shape {matrix.shape}")
    matrix = (matrix + matrix.T) / 2.0
    vals, vecs = np.linalg.eigh(matrix)
    lam_max = float(vals[-1])
    cutoff = max(lam_max, 0.0) / tol.cond_max
    singular = vals <= cutoff
    if np.any(singular):
        return CrbReport(n_expr=n_expr, unbounded=True,
                         null_space=vecs[:, singular].copy())
    if matrix.shape[0] == 1:
        return CrbReport(n_expr=n_expr, unbounded=False,
                         scalar_bound=1.0 / (n_expr * float(matrix[0, 0])))
    inverse = (vecs / vals) @ vecs.T
    return CrbReport(n_expr=n_expr, unbounded=False,
                     bound_matrix=inverse / n_expr)
