import numpy as np
import pytest

from qfi_bures.errors import (InvalidJet, NotPsdOnLadder, PreconditionFail)
from qfi_bures.linalg import matrix_sqrt, trace_norm
from qfi_bures.models import builtin_family, random_polynomial_family
from qfi_bures.verify import (EQ5_LADDER, LEMMA3_LADDER, SUITES,
                              THEOREM1_LADDER, THEOREM2_LADDER,
                              CongruenceNoise, ConvergenceTrace, eq5_check,
                              fit_decay, lemma3_check, random_lemma3_instance,
                              random_theorem2_instance, run_suite,
                              theorem1_check, theorem2_check)

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]])


def test_default_ladders_are_geometric():
    for ladder in (THEOREM1_LADDER, THEOREM2_LADDER, EQ5_LADDER,
                   LEMMA3_LADDER):
        assert len(ladder) >= 3
        ratios = [ladder[i] / ladder[i + 1] for i in range(len(ladder) - 1)]
        np.testing.assert_allclose(ratios, 2.0, rtol=1e-12)


def test_fit_decay_recovers_power_law():
    steps = [1e-1, 5e-2, 2.5e-2, 1.25e-2]
    residuals = [s ** 2 for s in steps]
    assert fit_decay(steps, residuals) == pytest.approx(2.0, abs=1e-9)


def test_fit_decay_floor_truncation():
    steps = [1e-1, 5e-2, 2.5e-2, 1.25e-2]
    # decays, then sits at a noise plateau the fit must ignore
    residuals = [1e-2, 2.5e-3, 1e-13, 9e-14]
    slope = fit_decay(steps, residuals, floor=1e-12)
    assert slope == pytest.approx(2.0, abs=1e-9)
    # everything below floor: counts as converged
    assert fit_decay(steps, [1e-14] * 4, floor=1e-12) == np.inf


def test_convergence_trace_validation():
    with pytest.raises(ValueError):
        ConvergenceTrace((1e-2, 1e-2), (1.0, 1.0), 1.0)
    with pytest.raises(ValueError):
        ConvergenceTrace((1e-2, 1e-3), (1.0, np.nan), 1.0)


def test_theorem1_check_passes_on_builtin():
    family = builtin_family("bloch-linear")
    report = theorem1_check(family, [[0.0], [0.3]], [[1.0]])
    assert report.passed
    assert report.check_name == "theorem1:bloch-linear"
    for detail in report.details:
        assert detail["extrapolated_gap"] <= 1e-4


def test_eq5_check_passes_on_builtin():
    family = builtin_family("paper-example")
    report = eq5_check(family, [[0.0], [0.25]], [[1.0]])
    assert report.passed
    corr = [d["correction"] for d in report.details]
    assert corr == [4.0, 0.0]  # rank change at the origin only


def test_theorem2_closed_form_is_exact():
    report = theorem2_check(np.array([1.0, 0.0]), SIGMA_X,
                            np.diag([0.0, 1.0]))
    assert report.passed
    for detail in report.details:
        assert abs(detail["residual"]) <= 1e-12
        assert detail["prediction"] == pytest.approx(
            1.0 - detail["eps"] ** 2, abs=1e-14)


def test_theorem2_rejects_invalid_jets():
    with pytest.raises(InvalidJet):
        theorem2_check(np.array([1.0, 0.0]), np.diag([0.0, 1.0]),
                       np.zeros((2, 2)))  # first-order kernel weight
    with pytest.raises(InvalidJet):
        theorem2_check(np.array([1.0, 0.0]), np.zeros((2, 2)),
                       np.diag([0.0, -1.0]))  # negative curvature
    with pytest.raises(InvalidJet):
        theorem2_check(np.array([[1.0, 0.5], [0.5, 0.0]]), SIGMA_X,
                       np.zeros((2, 2)))  # base not diagonal


def test_theorem2_not_psd_on_ladder():
    # rho(eps) = diag(1, 0.5) - 2.5e4 eps^2 I is indefinite at every rung
    with pytest.raises(NotPsdOnLadder):
        theorem2_check(np.array([1.0, 0.5]), np.zeros((2, 2)),
                       -2.5e4 * np.eye(2))


def test_theorem2_value_symmetric_under_role_swap():
    rng = np.random.default_rng(40)
    lam, r, s = random_theorem2_instance(rng, dim=4, rank=2)
    eps = 2e-2
    rho_p = np.diag(lam) + eps * r + eps * eps * s
    rho_m = np.diag(lam) - eps * r + eps * eps * s
    one = trace_norm(matrix_sqrt(rho_p) @ matrix_sqrt(rho_m))
    two = trace_norm(matrix_sqrt(rho_m) @ matrix_sqrt(rho_p))
    assert abs(one - two) <= 1e-10


def test_lemma3_scalar_instance():
    report = lemma3_check(np.array([[1.0]]), np.array([[1.0]]),
                          np.array([[2.0]]))
    assert report.passed
    # closed form sqrt(1 + 2d + 2d^2): remainder/d stays below 2d
    for detail in report.details:
        delta = detail["delta"]
        assert abs(detail["scaled"]) <= 2.0 * delta * 1.5


def test_lemma3_block_diagonal_exact():
    report = lemma3_check(np.diag([1.0, 2.0]), np.zeros((2, 2)),
                          np.diag([0.5, 1.5]))
    assert report.passed
    assert max(abs(d["residual"]) for d in report.details) <= 1e-12


def test_lemma3_preconditions():
    with pytest.raises(PreconditionFail):
        lemma3_check(np.diag([1.0, 0.0]), np.zeros((2, 2)), np.eye(2))
    with pytest.raises(PreconditionFail):
        # Schur complement 2 - 4 < 0
        lemma3_check(np.array([[1.0]]), np.array([[2.0]]),
                     np.array([[2.0]]))
    with pytest.raises(PreconditionFail):
        lemma3_check(np.eye(2), np.zeros((3, 3)), np.eye(2))


def test_congruence_noise_preserves_psd():
    rng = np.random.default_rng(50)
    gen = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    noise = CongruenceNoise(gen, exponent=1.5)
    base = np.diag([1.0, 0.5, 0.1, 0.0])
    for delta in (0.2, 0.05):
        perturbed = noise.apply(base, delta)
        assert np.linalg.eigvalsh(perturbed).min() >= -1e-12
    with pytest.raises(ValueError):
        CongruenceNoise(gen, exponent=1.0)


def test_random_lemma3_instance_satisfies_preconditions():
    rng = np.random.default_rng(60)
    a, b, c, noise = random_lemma3_instance(rng, top=2, bottom=2)
    assert np.linalg.eigvalsh(a).min() > 0
    schur = c - b.conj().T @ np.linalg.solve(a, b)
    assert np.linalg.eigvalsh(schur).min() >= -1e-12
    assert noise.exponent > 1.0


def test_suites_deterministic_and_tagged():
    one = run_suite("theorem2", 13)
    two = run_suite("theorem2", 13)
    assert [r.to_json_dict() for r in one] == [r.to_json_dict() for r in two]
    assert all(r.seed == 13 for r in one)


def test_run_suite_rejects_unknown():
    with pytest.raises(ValueError):
        run_suite("theorem9", 0)
    assert SUITES == ("theorem1", "theorem2", "lemma3", "eq5")


def test_extra_families_join_population():
    extra = random_polynomial_family(404, dim=2, params=1)
    base = run_suite("theorem1", 2)
    extended = run_suite("theorem1", 2, extra_families=[extra])
    assert len(extended) == len(base) + 1
    assert extended[-1].check_name.endswith(extra.name)
