"""Support/kernel splitting of a directional jet and the rank-change term.

At a rank-changing point the forward Bures metric g exceeds the QFI
quadratic form: 4g = F + 2 sum_k d^2 lambda_k, summed over the kernel
eigenvalues. Tracking those eigenvalues through the rank change by finite
differences is fragile (ordering swaps as branches cross zero), so the
correction is evaluated algebraically instead: in the (support, kernel)
eigenbasis of the base state, kernel eigenvalues grow as eps^2 times the
eigenvalues of

    T22 = S22 - R21 Lambda_+^{-1} R12,

where R and S are the jet's first and half-second directional derivatives,
so the correction equals 4*Tr(T22). One eigendecomposition at the base
point, no tracking. The finite-difference route survives only as a test
oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import JetInconsistent
from .linalg import frobenius_norm, hermitian_part
from .metrics import bures_metric_forward, qfi_directional
from .models import DirectionalJet, StateFamily
from .tolerances import DEFAULT_TOL, Tolerances


@dataclass(frozen=True)
class SupportDecomposition:
    """Jet blocks in the ordered (support, kernel) eigenbasis of the base.

    ``basis`` holds the eigenvectors, support columns first; ``rho1_*``
    and ``rho2_*`` are the blocks of the jet's first and half-second
    directional derivatives (s = support, k = kernel). ``gen_sk``/
    ``gen_ks`` are the off-diagonal blocks -i Lambda_+^{-1} rho1_sk and
    its adjoint mirror, the generator of the first-order rotation that
    keeps the kernel aligned; together they form a Hermitian matrix.
    ``kernel_curvature`` is T22 above: half the second derivative of each
    kernel eigenvalue along the jet direction, in matrix form.
    ``rank_threshold`` records the relative eigenvalue cutoff that decided
    the split, since corrections near the threshold depend on it.
    """

    support_eigs: np.ndarray
    basis: np.ndarray
    rank: int
    rank_threshold: float
    rho1_ss: np.ndarray
    rho1_sk: np.ndarray
    rho1_ks: np.ndarray
    rho1_kk: np.ndarray
    rho2_ss: np.ndarray
    rho2_sk: np.ndarray
    rho2_ks: np.ndarray
    rho2_kk: np.ndarray
    gen_sk: np.ndarray
    gen_ks: np.ndarray
    kernel_curvature: np.ndarray

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def kernel_dim(self) -> int:
        return self.dim - self.rank


def decompose(jet: DirectionalJet, tol: Tolerances = DEFAULT_TOL) -> SupportDecomposition:
    """Split a jet into support/kernel blocks and form the curvature T22.

    The base state's spectrum (eigenvalues descending, rank from the
    relative threshold) fixes the split. Two facts forced by positivity of
    the family are checked rather than assumed: the kernel-kernel block of
    the first derivative must vanish, and T22 must be PSD. Violations
    beyond ``tol.jet_psd`` raise ``JetInconsistent`` - they mean the
    family is not a PSD-differentiable curve at this point, or its
    derivatives are too noisy to trust.
    """
    spectrum = jet.state.spectrum
    vals = spectrum.eigenvalues
    vecs = spectrum.eigenvectors
    rank = spectrum.rank
    threshold = tol.rank * max(float(vals[0]) if len(vals) else 0.0, 1.0)

    r_full = vecs.conj().T @ jet.rho1 @ vecs
    s_full = vecs.conj().T @ jet.rho2 @ vecs
    support = slice(0, rank)
    kernel = slice(rank, len(vals))

    rho1_kk = r_full[kernel, kernel]
    if rho1_kk.size and frobenius_norm(rho1_kk) > tol.jet_psd:
        raise JetInconsistent(
            f"kernel block of the first derivative has norm "
            f"{frobenius_norm(rho1_kk):.3e} > {tol.jet_psd:.1e}; a PSD family "
            "cannot move linearly inside its kernel"
        )

    inv_support = 1.0 / vals[support]
    rho1_sk = r_full[support, kernel]
    rho1_ks = r_full[kernel, support]
    curvature = hermitian_part(
        s_full[kernel, kernel] - rho1_ks @ (inv_support[:, None] * rho1_sk))
    if curvature.size:
        min_eig = float(np.linalg.eigvalsh(curvature)[0])
        if min_eig < -tol.jet_psd:
            raise JetInconsistent(
                f"kernel curvature T22 has eigenvalue {min_eig:.3e} < "
                f"-{tol.jet_psd:.1e}; kernel eigenvalues of a PSD family "
                "cannot curve downward through zero"
            )

    return SupportDecomposition(
        support_eigs=vals[support].copy(),
        basis=vecs.copy(),
        rank=rank,
        rank_threshold=threshold,
        rho1_ss=r_full[support, support],
        rho1_sk=rho1_sk,
        rho1_ks=rho1_ks,
        rho1_kk=rho1_kk,
        rho2_ss=s_full[support, support],
        rho2_sk=s_full[support, kernel],
        rho2_ks=s_full[kernel, support],
        rho2_kk=s_full[kernel, kernel],
        gen_sk=-1j * (inv_support[:, None] * rho1_sk),
        gen_ks=1j * (rho1_ks * inv_support[None, :]),
        kernel_curvature=curvature,
    )


def kernel_hessian_correction(family: StateFamily, x, y,
                              tol: Tolerances = DEFAULT_TOL) -> float:
    """Rank-change correction 4*Tr(T22) along direction y (0 if full rank)."""
    decomposition = decompose(family.directional_jet(x, y), tol)
    if decomposition.kernel_dim == 0:
        return 0.0
    return 4.0 * float(np.trace(decomposition.kernel_curvature).real)


def correction_matrix(family: StateFamily, x,
                      tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """P x P matrix C with y^T C y = kernel_hessian_correction along y.

    The correction is an exact quadratic form in the direction (R is
    linear and S quadratic in y), so polarization introduces no error.
    """

    def probe(y) -> float:
        return kernel_hessian_correction(family, x, y, tol)

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


def eq5_residual(family: StateFamily, x, y, eps: float = 1e-4,
                 tol: Tolerances = DEFAULT_TOL) -> float:
    """|4*forward_metric - QFI form - correction| along y; O(eps) when smooth."""
    forward = bures_metric_forward(family, x, y, eps, tol)
    qfi = qfi_directional(family, x, y, tol)
    correction = kernel_hessian_correction(family, x, y, tol)
    return abs(4.0 * forward.value - qfi - correction)
