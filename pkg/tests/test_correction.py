import numpy as np
import pytest

from qfi_bures.correction import (correction_matrix, decompose, eq5_residual,
                                  kernel_hessian_correction)
from qfi_bures.errors import JetInconsistent
from qfi_bures.linalg import DensityMatrix
from qfi_bures.models import (DirectionalJet, builtin_family,
                              random_polynomial_family,
                              random_rank_deficient_family)

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]])


def test_decompose_paper_example_origin():
    family = builtin_family("paper-example")
    jet = family.directional_jet([0.0], [1.0])
    dec = decompose(jet)
    assert dec.rank == 1 and dec.kernel_dim == 1
    np.testing.assert_allclose(dec.support_eigs, [1.0], atol=1e-15)
    assert np.abs(dec.rho1_sk).max() <= 1e-14
    np.testing.assert_allclose(dec.kernel_curvature, [[1.0]], atol=1e-12)


def test_decompose_full_rank_has_empty_kernel():
    family = builtin_family("polynomial")
    jet = family.directional_jet([0.1, 0.0], [1.0, 1.0])
    dec = decompose(jet)
    assert dec.kernel_dim == 0
    assert dec.kernel_curvature.shape == (0, 0)


def test_decompose_rank_one_closed_form():
    # curvature S22 - R21 inv(L) R12 = 1 - 1 = 0
    jet = DirectionalJet(DensityMatrix(np.diag([1.0, 0.0])),
                         SIGMA_X, np.diag([0.0, 1.0]))
    dec = decompose(jet)
    np.testing.assert_allclose(dec.kernel_curvature, [[0.0]], atol=1e-14)


def test_decompose_rejects_kernel_first_order():
    # rho1 with weight in the kernel block breaks positivity of the jet
    jet = DirectionalJet(DensityMatrix(np.diag([1.0, 0.0])),
                         np.diag([0.0, 1.0]), np.zeros((2, 2)))
    with pytest.raises(JetInconsistent):
        decompose(jet)


def test_decompose_rejects_negative_curvature():
    jet = DirectionalJet(DensityMatrix(np.diag([1.0, 0.0])),
                         np.zeros((2, 2)), np.diag([0.0, -1.0]))
    with pytest.raises(JetInconsistent):
        decompose(jet)


def test_correction_paper_example():
    family = builtin_family("paper-example")
    assert kernel_hessian_correction(family, [0.0], [1.0]) == 4.0
    assert kernel_hessian_correction(family, [0.3], [1.0]) == 0.0


def test_correction_matrix_full_rank_zero():
    family = random_polynomial_family(3, dim=3, params=2)
    np.testing.assert_array_equal(correction_matrix(family, [0.05, -0.02]),
                                  np.zeros((2, 2)))


def test_correction_matches_eigenvalue_hessian():
    """Independent oracle: FD Hessian of the summed kernel eigenvalues.

    Along x = eps*y the kernel eigenvalues grow as eps^2 eig(T22), so
    sum lambda_k(eps y) ~ eps^2 Tr T22 and the correction 4 Tr T22 equals
    twice the directional second derivative.
    """
    rng = np.random.default_rng(17)
    for seed in (12, 99, 457):
        family = random_rank_deficient_family(seed, dim=4, params=2, rank=2)
        y = rng.normal(size=2)
        y /= np.linalg.norm(y)
        corr = kernel_hessian_correction(family, np.zeros(2), y)
        kernel_dim = 2

        def kernel_sum(eps):
            values = np.linalg.eigvalsh(family.matrix(eps * y))
            return float(values[:kernel_dim].sum())

        step = 1e-4
        hessian = (kernel_sum(step) - 2.0 * kernel_sum(0.0)
                   + kernel_sum(-step)) / step ** 2
        assert corr == pytest.approx(2.0 * hessian, abs=1e-4)


def test_correction_kernel_gauge_invariance():
    """A unitary acting only on the kernel leaves the correction alone."""
    family = random_rank_deficient_family(31, dim=4, params=2, rank=2)
    state = family.evaluate(np.zeros(2))
    jet = family.directional_jet(np.zeros(2), np.array([0.8, -0.6]))
    base = 4.0 * np.trace(decompose(jet).kernel_curvature).real

    vecs = state.spectrum.eigenvectors
    theta = 0.61
    mix = np.eye(4, dtype=complex)
    mix[2:, 2:] = [[np.cos(theta), -np.sin(theta)],
                   [np.sin(theta), np.cos(theta)]]
    w = vecs @ mix @ vecs.conj().T
    np.testing.assert_allclose(w @ state.matrix @ w.conj().T, state.matrix,
                               atol=1e-12)
    gauged = DirectionalJet(state, w @ jet.rho1 @ w.conj().T,
                            w @ jet.rho2 @ w.conj().T)
    rotated = 4.0 * np.trace(decompose(gauged).kernel_curvature).real
    assert abs(base - rotated) <= 1e-12


def test_eq5_residual_decays():
    cases = [(builtin_family("paper-example"), [0.0], [1.0]),
             (builtin_family("paper-example"), [0.2], [1.0]),
             (random_rank_deficient_family(8, dim=3, params=2, rank=2),
              [0.0, 0.0], [0.6, 0.8])]
    rng = np.random.default_rng(23)
    for seed in range(5):
        family = random_polynomial_family(seed, dim=3, params=2)
        x = rng.uniform(-0.15, 0.15, size=2)
        y = rng.normal(size=2)
        cases.append((family, x, y / np.linalg.norm(y)))
    for family, x, y in cases:
        coarse = eq5_residual(family, x, y, eps=2e-3)
        fine = eq5_residual(family, x, y, eps=1e-3)
        if coarse < 1e-8:
            continue  # already at the measurement floor
        assert fine <= 0.75 * coarse


def test_eq5_residual_paper_example_origin():
    family = builtin_family("paper-example")
    assert eq5_residual(family, [0.0], [1.0], eps=1e-4) <= 1e-3
