"""Validated Hermitian/PSD matrix primitives.

Everything here operates on plain complex ndarrays. Construction-style
helpers (``require_hermitian``, :class:`DensityMatrix`) validate their input
against a :class:`~qfi_bures.tolerances.Tolerances` instance and return the
exactly Hermitized form; downstream code can then rely on symmetry holding
to the last bit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DomainViolation,
    NegativeEigenvalue,
    NonHermitian,
    ShapeMismatch,
    SolverFailure,
)
from .tolerances import DEFAULT_TOL, Tolerances

NORM_KINDS = ("trace", "frobenius", "spectral")


def as_matrix(matrix) -> np.ndarray:
    """Coerce to a 2-D complex ndarray with finite entries."""
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2:
        raise ShapeMismatch(f"expected a 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    return m


def hermitian_part(matrix) -> np.ndarray:
    """Return the exact Hermitization (M + M†)/2."""
    m = as_matrix(matrix)
    if m.shape[0] != m.shape[1]:
        raise ShapeMismatch(f"Hermitization needs a square matrix, got {m.shape}")
    return (m + m.conj().T) / 2


def require_hermitian(matrix, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Validate Hermitian symmetry within ``tol.herm`` and return (M + M†)/2.

    The acceptance window is relative to ``max(1, max|M_ij|)`` so that
    roundoff-level asymmetry from finite-difference constructions passes
    while genuinely non-Hermitian input is rejected.
    """
    m = as_matrix(matrix)
    if m.shape[0] != m.shape[1]:
        raise NonHermitian(f"matrix of shape {m.shape} cannot be Hermitian")
    scale = max(1.0, float(np.abs(m).max(initial=0.0)))
    asym = float(np.abs(m - m.conj().T).max(initial=0.0))
    if asym > tol.herm * scale:
        raise NonHermitian(
            f"Hermitian symmetry violated: max asymmetry {asym:.3e} "
            f"exceeds {tol.herm:.1e} * {scale:.3e}"
        )
    return (m + m.conj().T) / 2


@dataclass(frozen=True)
class Spectrum:
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending.

    ``eigenvectors`` holds orthonormal eigenvectors as columns, aligned with
    ``eigenvalues``. ``rank`` counts eigenvalues above the relative zero
    threshold ``tol.rank * max(lambda_max, 1)``.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    rank: int

    @property
    def dim(self) -> int:
        return len(self.eigenvalues)

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def eigh(matrix, tol: Tolerances = DEFAULT_TOL) -> Spectrum:
    """Eigendecompose a Hermitian matrix into a descending :class:`Spectrum`.

    Degenerate eigenvectors are accepted as the solver returns them;
    consumers must be invariant under that gauge freedom.
    """
    m = require_hermitian(matrix, tol)
    try:
        vals, vecs = np.linalg.eigh(m)
    except np.linalg.LinAlgError as exc:
        raise SolverFailure(f"eigh did not converge: {exc}") from exc
    vals = vals[::-1].copy()
    vecs = vecs[:, ::-1].copy()
    threshold = tol.rank * max(float(vals[0]) if len(vals) else 0.0, 1.0)
    rank = int(np.count_nonzero(vals > threshold))
    return Spectrum(eigenvalues=vals, eigenvectors=vecs, rank=rank)


def matrix_sqrt(matrix, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Principal square root of a PSD Hermitian matrix.

    Eigenvalues inside the window ``[-tol.psd * scale, 0]`` are clamped to
    zero (eigensolvers return tiny negatives for exactly singular input);
    anything more negative raises :class:`NegativeEigenvalue`.
    """
    spec = eigh(matrix, tol)
    vals = spec.eigenvalues
    scale = max(1.0, float(np.abs(vals).max(initial=0.0)))
    if len(vals) and float(vals[-1]) < -tol.psd * scale:
        raise NegativeEigenvalue(
            f"matrix not PSD: min eigenvalue {vals[-1]:.3e} "
            f"below -{tol.psd:.1e} * {scale:.3e}"
        )
    root = np.sqrt(np.clip(vals, 0.0, None))
    v = spec.eigenvectors
    return hermitian_part((v * root) @ v.conj().T)


def trace_norm(matrix) -> float:
    """Sum of singular values (Schatten 1-norm)."""
    return float(np.linalg.svd(as_matrix(matrix), compute_uv=False).sum())


def frobenius_norm(matrix) -> float:
    """Root sum of squared singular values (Schatten 2-norm)."""
    return float(np.linalg.norm(as_matrix(matrix)))


def spectral_norm(matrix) -> float:
    """Largest singular value (Schatten infinity-norm)."""
    s = np.linalg.svd(as_matrix(matrix), compute_uv=False)
    return float(s[0]) if len(s) else 0.0


_NORM_FUNCS = {
    "trace": trace_norm,
    "frobenius": frobenius_norm,
    "spectral": spectral_norm,
}


def unitarily_invariant_norm(matrix, kind: str) -> float:
    """Dispatch to one of the supported norms: trace, frobenius, spectral."""
    try:
        func = _NORM_FUNCS[kind]
    except KeyError:
        raise ValueError(f"unknown norm kind {kind!r}; expected one of {NORM_KINDS}")
    return func(matrix)


def mirsky_gap(m1, m2, kind: str = "frobenius") -> tuple[float, float]:
    """Both sides of the singular-value perturbation bound.

    Returns ``(lhs, rhs)`` where ``lhs = ||M1 - M2||`` and ``rhs`` is the
    same norm of ``diag(a_i - b_i)`` built from the descending singular
    values of the operands. For every unitarily invariant norm
    ``lhs >= rhs`` holds up to roundoff.
    """
    a = as_matrix(m1)
    b = as_matrix(m2)
    if a.shape != b.shape:
        raise ShapeMismatch(f"shape mismatch: {a.shape} vs {b.shape}")
    lhs = unitarily_invariant_norm(a - b, kind)
    sa = np.linalg.svd(a, compute_uv=False)
    sb = np.linalg.svd(b, compute_uv=False)
    diff = sa - sb
    if kind == "trace":
        rhs = float(np.abs(diff).sum())
    elif kind == "frobenius":
        rhs = float(np.linalg.norm(diff))
    else:
        rhs = float(np.abs(diff).max(initial=0.0))
    return lhs, rhs


class DensityMatrix:
    """Trace-one PSD Hermitian matrix with clamped spectral access.

    Validation happens once at construction: Hermitian symmetry, unit
    trace within ``tol.trace`` and positivity within ``tol.psd``. The
    spectrum is computed eagerly with the tiny-negative window clamped to
    zero, so repeated metric evaluations reuse it. Immutable.
    """

    __slots__ = ("_matrix", "_spectrum", "_sqrt", "_tol")

    def __init__(self, matrix, tol: Tolerances = DEFAULT_TOL):
        try:
            m = require_hermitian(matrix, tol)
        except NonHermitian as exc:
            raise DomainViolation(str(exc)) from exc
        tr = float(np.trace(m).real)
        if abs(tr - 1.0) > tol.trace:
            raise DomainViolation(f"trace {tr!r} deviates from 1 beyond {tol.trace:.1e}")
        spec = eigh(m, tol)
        vals = spec.eigenvalues
        scale = max(1.0, float(np.abs(vals).max(initial=0.0)))
        if len(vals) and float(vals[-1]) < -tol.psd * scale:
            raise DomainViolation(
                f"not PSD: min eigenvalue {vals[-1]:.3e} below the "
                f"-{tol.psd:.1e} clamping window"
            )
        clamped = np.clip(vals, 0.0, None)
        # Sub-rank-threshold eigenvalues are numerical zeros; keeping them
        # would let sqrt() amplify O(1e-17) noise to O(1e-9) and pollute
        # fidelities against nearby full-rank states at linear order.
        clamped[spec.rank:] = 0.0
        self._matrix = m
        self._spectrum = Spectrum(clamped, spec.eigenvectors, spec.rank)
        self._sqrt = None
        self._tol = tol

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    @property
    def dim(self) -> int:
        return self._matrix.shape[0]

    @property
    def spectrum(self) -> Spectrum:
        return self._spectrum

    def sqrt(self) -> np.ndarray:
        """Principal square root, cached after the first call."""
        if self._sqrt is None:
            spec = self._spectrum
            root = np.sqrt(spec.eigenvalues)
            v = spec.eigenvectors
            self._sqrt = hermitian_part((v * root) @ v.conj().T)
        return self._sqrt

    def __repr__(self) -> str:
        return f"DensityMatrix(dim={self.dim}, rank={self._spectrum.rank})"
