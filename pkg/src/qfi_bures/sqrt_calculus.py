"""Directional (Fréchet) derivatives of the matrix square root.

For a strictly positive definite ``A``, the first directional derivative of
``sqrt`` along a Hermitian ``H`` is the integral

    D(sqrt A) . H = ∫_0^∞ exp(-s sqrt A) H exp(-s sqrt A) ds,

which is exactly the solution ``X`` of the Sylvester equation
``sqrt(A) X + X sqrt(A) = H``. In the eigenbasis of ``A`` that solution is
entrywise ``H_ij / (sqrt(a_i) + sqrt(a_j))``, and that closed form is what
this module evaluates (no quadrature). Higher orders follow the recursion

    D^n(sqrt A) . H = -D(sqrt A) . [ sum_{p+q=n-2}
        n!/((p+1)! (q+1)!) (D^{p+1} sqrt A . H)(D^{q+1} sqrt A . H) ],

and the order-``n`` truncated expansion of ``sqrt(A + H)`` is
``sqrt(A) + sum_k D^k(sqrt A).H / k!`` with remainder ``O(||H||_2^{n+1})``.
"""

from __future__ import annotations

from math import factorial

import numpy as np

from .errors import NotPositiveDefinite, ShapeMismatch
from .linalg import eigh, hermitian_part, require_hermitian
from .tolerances import DEFAULT_TOL, Tolerances


class SqrtDerivativeContext:
    """Cached eigendata of a strictly positive definite base point.

    Raises :class:`NotPositiveDefinite` unless the smallest eigenvalue
    exceeds ``tol.pd * max(1, lambda_max)``; the derivative formulas divide
    by ``sqrt(a_i) + sqrt(a_j)`` and degrade near singularity, so the
    precondition is hard rather than a silent noise amplifier.
    """

    __slots__ = ("matrix", "eigenvalues", "eigenvectors", "sqrt_eigenvalues",
                 "min_eig", "_denominator", "_sqrt_matrix")

    def __init__(self, matrix, tol: Tolerances = DEFAULT_TOL):
        m = require_hermitian(matrix, tol)
        spec = eigh(m, tol)
        vals = spec.eigenvalues
        scale = max(1.0, float(vals[0]) if len(vals) else 0.0)
        min_eig = float(vals[-1]) if len(vals) else 0.0
        if min_eig <= tol.pd * scale:
            raise NotPositiveDefinite(
                f"base matrix must be strictly PD: min eigenvalue {min_eig:.3e} "
                f"<= {tol.pd:.1e} * {scale:.3e}"
            )
        self.matrix = m
        self.eigenvalues = vals
        self.eigenvectors = spec.eigenvectors
        self.sqrt_eigenvalues = np.sqrt(vals)
        self.min_eig = min_eig
        self._denominator = self.sqrt_eigenvalues[:, None] + self.sqrt_eigenvalues[None, :]
        self._sqrt_matrix = None

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def sqrt_matrix(self) -> np.ndarray:
        if self._sqrt_matrix is None:
            v = self.eigenvectors
            self._sqrt_matrix = hermitian_part((v * self.sqrt_eigenvalues) @ v.conj().T)
        return self._sqrt_matrix


def frechet_sqrt(ctx: SqrtDerivativeContext, direction) -> np.ndarray:
    """First directional derivative of ``sqrt`` at ``ctx`` along ``direction``.

    Solves ``sqrt(A) X + X sqrt(A) = H`` in the eigenbasis; the output is
    Hermitian whenever ``H`` is.
    """
    h = np.asarray(direction, dtype=complex)
    if h.shape != ctx.matrix.shape:
        raise ShapeMismatch(f"direction shape {h.shape} != base shape {ctx.matrix.shape}")
    v = ctx.eigenvectors
    h_eig = v.conj().T @ h @ v
    x_eig = h_eig / ctx._denominator
    return v @ x_eig @ v.conj().T


def frechet_sqrt_order_n(ctx: SqrtDerivativeContext, direction, order: int) -> np.ndarray:
    """``order``-th directional derivative of ``sqrt`` along ``direction``.

    Order 1 delegates to :func:`frechet_sqrt`; higher orders apply the
    product recursion, building the lower orders bottom-up so each is
    computed once per call.
    """
    if order < 1:
        raise ValueError(f"derivative order must be >= 1, got {order}")
    return _derivative_ladder(ctx, np.asarray(direction, dtype=complex), order)[order]


def _derivative_ladder(ctx: SqrtDerivativeContext, h: np.ndarray, order: int) -> dict[int, np.ndarray]:
    ladder = {1: frechet_sqrt(ctx, h)}
    for n in range(2, order + 1):
        acc = np.zeros_like(h)
        for p in range(n - 1):
            q = n - 2 - p
            coeff = factorial(n) / (factorial(p + 1) * factorial(q + 1))
            acc += coeff * (ladder[p + 1] @ ladder[q + 1])
        ladder[n] = -frechet_sqrt(ctx, acc)
    return ladder


def taylor_sqrt(ctx: SqrtDerivativeContext, direction, order: int,
                tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Truncated expansion of ``sqrt(A + H)`` around ``A`` up to ``order``.

    Requires ``A + H`` strictly PD (checked); ``order = 0`` returns
    ``sqrt(A)`` exactly.
    """
    if order < 0:
        raise ValueError(f"expansion order must be >= 0, got {order}")
    h = np.asarray(direction, dtype=complex)
    if h.shape != ctx.matrix.shape:
        raise ShapeMismatch(f"direction shape {h.shape} != base shape {ctx.matrix.shape}")
    shifted = eigh(ctx.matrix + h, tol)
    scale = max(1.0, float(shifted.eigenvalues[0]))
    if float(shifted.eigenvalues[-1]) <= tol.pd * scale:
        raise NotPositiveDefinite(
            f"shifted matrix not strictly PD: min eigenvalue "
            f"{shifted.eigenvalues[-1]:.3e}"
        )
    total = ctx.sqrt_matrix().copy()
    if order >= 1:
        ladder = _derivative_ladder(ctx, h, order)
        for k in range(1, order + 1):
            total = total + ladder[k] / factorial(k)
    return hermitian_part(total)
