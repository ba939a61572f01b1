import numpy as np
import pytest

from qfi_bures.errors import BoundaryPoint, ShapeMismatch, StepTooSmall
from qfi_bures.linalg import DensityMatrix, eigh
from qfi_bures.metrics import (bures_distance, bures_distance_squared,
                               bures_metric_central, bures_metric_forward,
                               crb, directional_metric, fidelity,
                               metric_matrix, qfi_directional,
                               qfi_from_spectrum, qfi_matrix)
from qfi_bures.models import builtin_family, random_polynomial_family
from qfi_bures.tolerances import DEFAULT_TOL


def random_density(seed, dim):
    rng = np.random.default_rng(seed)
    m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = m @ m.conj().T
    return DensityMatrix(rho / np.trace(rho).real)


# --- fidelity and distances -------------------------------------------------


def test_fidelity_identical_state():
    rho = random_density(0, 3)
    assert fidelity(rho, rho) == pytest.approx(1.0, abs=1e-12)
    assert bures_distance_squared(rho, rho) <= 1e-12


def test_fidelity_symmetry():
    for seed in range(10):
        a = random_density(seed, 3)
        b = random_density(seed + 100, 3)
        assert abs(fidelity(a, b) - fidelity(b, a)) <= 1e-10


def test_fidelity_mixed_vs_pure_oracle():
    # maximally mixed qubit against |0><0|: sqrt(1/2)
    mixed = DensityMatrix(np.eye(2) / 2.0)
    pure = DensityMatrix(np.diag([1.0, 0.0]))
    assert fidelity(mixed, pure) == pytest.approx(np.sqrt(0.5), abs=1e-12)


def test_fidelity_shape_mismatch():
    with pytest.raises(ShapeMismatch):
        fidelity(random_density(1, 2), random_density(2, 3))


def test_bures_distance_relation():
    a = random_density(3, 3)
    b = random_density(4, 3)
    f = fidelity(a, b)
    assert bures_distance_squared(a, b) == pytest.approx(2 * (1 - f), abs=1e-14)
    assert bures_distance(a, b) == pytest.approx(
        np.sqrt(2 * (1 - f)), abs=1e-12)


# --- information matrix -----------------------------------------------------


def test_qfi_paper_example_values():
    family = builtin_family("paper-example")
    assert qfi_matrix(family, [0.0])[0, 0] == 0.0
    assert qfi_matrix(family, [0.5])[0, 0] == pytest.approx(16.0 / 3.0,
                                                           rel=1e-10)


def test_qfi_closed_form_families():
    rotation = builtin_family("qubit-rotation")
    for theta in (0.0, 0.9, -1.4):
        assert qfi_matrix(rotation, [theta])[0, 0] == pytest.approx(
            1.0, abs=1e-10)
    bloch = builtin_family("bloch-linear")
    for x in (-0.6, 0.0, 0.35):
        assert qfi_matrix(bloch, [x])[0, 0] == pytest.approx(
            1.0 / (1.0 - x * x), rel=1e-10)


def test_qfi_directional_is_quadratic_form():
    family = random_polynomial_family(11, dim=3, params=2)
    x = np.array([0.05, -0.1])
    full = qfi_matrix(family, x)
    y = np.array([0.3, -1.1])
    assert qfi_directional(family, x, y) == pytest.approx(
        float(y @ full @ y), rel=1e-9)


def test_qfi_matrix_psd_and_symmetric():
    for seed in (0, 5, 9):
        family = random_polynomial_family(seed, dim=3, params=2)
        m = qfi_matrix(family, [0.1, -0.05])
        np.testing.assert_allclose(m, m.T, atol=1e-10)
        assert np.linalg.eigvalsh(m).min() >= -1e-10


def test_qfi_gauge_invariance_in_degenerate_blocks():
    """Rotating eigenvectors inside a degenerate eigenspace is gauge."""
    rho = np.diag([0.4, 0.4, 0.2])
    spectrum = eigh(rho, DEFAULT_TOL)
    rng = np.random.default_rng(6)
    h = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    deriv = (h + h.conj().T) / 2.0
    deriv -= np.trace(deriv).real * np.eye(3) / 3.0
    base = qfi_from_spectrum(spectrum, [deriv], DEFAULT_TOL)

    # unitary mixing the two lambda = 0.4 eigenvectors
    theta = 0.83
    mix = np.eye(3, dtype=complex)
    mix[:2, :2] = [[np.cos(theta), -np.sin(theta)],
                   [np.sin(theta), np.cos(theta)]]
    rotated = type(spectrum)(spectrum.eigenvalues,
                             spectrum.eigenvectors @ mix, spectrum.rank)
    gauged = qfi_from_spectrum(rotated, [deriv], DEFAULT_TOL)
    assert abs(base[0, 0] - gauged[0, 0]) <= 1e-10


# --- discretized metrics ----------------------------------------------------


def test_central_metric_zero_at_rank_change():
    family = builtin_family("paper-example")
    est = bures_metric_central(family, [0.0], [1.0])
    assert est.richardson_used
    assert abs(4.0 * est.value) <= 1e-6


def test_forward_metric_sees_correction():
    family = builtin_family("paper-example")
    est = bures_metric_forward(family, [0.0], [1.0], eps=1e-4)
    assert 4.0 * est.value == pytest.approx(4.0, abs=1e-3)


def test_central_matches_qfi_on_full_rank():
    family = random_polynomial_family(21, dim=3, params=2)
    x = np.array([0.04, 0.08])
    qfi = qfi_matrix(family, x)
    metric4 = 4.0 * metric_matrix(family, x)
    assert np.abs(metric4 - qfi).max() <= 1e-4 * max(1.0, np.abs(qfi).max())


def test_plain_central_estimate_converges_quadratically():
    # needs a strongly curved family so the eps^2 error term stays above
    # the 1/eps^2-amplified roundoff over the whole ladder
    family = builtin_family("paper-example")
    qfi = qfi_directional(family, [0.5], [1.0])
    eps = [2e-2, 1e-2, 5e-3, 2.5e-3]
    gaps = [abs(4.0 * bures_metric_central(family, [0.5], [1.0], e,
                                           richardson=False).value - qfi)
            for e in eps]
    slope = np.polyfit(np.log(eps), np.log(gaps), 1)[0]
    assert slope >= 1.7


def test_richardson_beats_plain_central():
    family = builtin_family("paper-example")
    qfi = qfi_directional(family, [0.5], [1.0])
    plain = abs(4.0 * bures_metric_central(family, [0.5], [1.0], 1e-2,
                                           richardson=False).value - qfi)
    extrapolated = abs(4.0 * bures_metric_central(family, [0.5], [1.0], 1e-2,
                                                  richardson=True).value - qfi)
    assert extrapolated <= plain / 50.0


def test_scheme_dispatch_and_validation():
    family = builtin_family("bloch-linear")
    forward = directional_metric(family, [0.1], [1.0], "forward")
    central = directional_metric(family, [0.1], [1.0], "central")
    assert forward.scheme == "forward" and central.scheme == "central"
    with pytest.raises(ValueError):
        directional_metric(family, [0.1], [1.0], "backward")
    with pytest.raises(StepTooSmall):
        bures_metric_central(family, [0.1], [1.0], eps=1e-9)
    with pytest.raises(BoundaryPoint):
        bures_metric_forward(family, [0.999999], [1.0], eps=1e-3)


# --- Cramer-Rao reporting ---------------------------------------------------


def test_crb_regular_case():
    report = crb(np.diag([4.0, 1.0]), n_expr=2)
    assert not report.unbounded
    np.testing.assert_allclose(report.bound_matrix,
                               np.diag([0.125, 0.5]), atol=1e-12)


def test_crb_scalar_case():
    report = crb(np.array([[16.0 / 3.0]]))
    assert report.scalar_bound == pytest.approx(3.0 / 16.0, rel=1e-12)


def test_crb_singular_case():
    report = crb(np.diag([1.0, 0.0]))
    assert report.unbounded
    np.testing.assert_allclose(np.abs(report.null_space.ravel()),
                               [0.0, 1.0], atol=1e-12)


def test_crb_rejects_bad_count():
    with pytest.raises(ValueError):
        crb(np.eye(2), n_expr=0)
