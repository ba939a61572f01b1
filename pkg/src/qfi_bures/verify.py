"""Numerical certification of the metric identities and expansion lemmas.

Little-o remainder claims are certified as measured log-log decay: each
check evaluates a residual down a geometric step ladder, fits a slope by
least squares, and passes when the slope clears the threshold appropriate
to the claimed order (2.0-ish decay thresholded at 1.5 for the centered
metric gap, 0.7 for residuals already divided by their leading power).
Residuals that fall below a roundoff floor stop the fit; a ladder that is
entirely below floor counts as converged, since the quantity is then
pinned at measurement precision, far under every accuracy threshold used.

Checks take explicit inputs; the suite_* drivers assemble the populations
(built-in families, seeded random families, seeded random block
instances) used by the command-line ``verify`` subcommand and the
acceptance tests.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .correction import kernel_hessian_correction
from .errors import InvalidJet, NotPsdOnLadder, PreconditionFail
from .linalg import (frobenius_norm, hermitian_part, matrix_sqrt,
                     require_hermitian, spectral_norm, trace_norm)
from .metrics import bures_metric_forward, qfi_directional, _central_value
from .models import (StateFamily, as_parameter_vector, bloch_linear_family,
                     builtin_family, paper_example_family,
                     random_polynomial_family, random_rank_deficient_family)
from .tolerances import DEFAULT_TOL, Tolerances

THEOREM1_LADDER = (8e-3, 4e-3, 2e-3, 1e-3)
EQ5_LADDER = (4e-3, 2e-3, 1e-3, 5e-4, 2.5e-4)
THEOREM2_LADDER = (8e-2, 4e-2, 2e-2, 1e-2, 5e-3)
LEMMA3_LADDER = tuple(0.1 * 2 ** -i for i in range(8))

SLOPE_FLOOR = 1e-12


def fit_decay(steps, residuals, floor: float = SLOPE_FLOOR) -> float:
    """Log-log least-squares decay order of residuals over descending steps.

    The fit stops at the first residual at or below ``floor``: past that
    point values bounce inside roundoff and their slope is meaningless.
    Returns inf when fewer than two points remain, meaning the residual
    converged below the floor too fast to measure.
    """
    kept_steps, kept_residuals = [], []
    for s, r in zip(steps, residuals):
        if r <= floor:
            break
        kept_steps.append(s)
        kept_residuals.append(r)
    if len(kept_steps) < 2:
        return float("inf")
    slope = np.polyfit(np.log(kept_steps), np.log(kept_residuals), 1)[0]
    return float(slope)


@dataclass(frozen=True)
class ConvergenceTrace:
    steps: tuple
    residuals: tuple
    fitted_slope: float

    def __post_init__(self):
        steps = np.asarray(self.steps, dtype=float)
        if np.any(steps <= 0) or np.any(np.diff(steps) >= 0):
            raise ValueError(f"steps must be positive and strictly decreasing: {self.steps}")
        if not np.all(np.isfinite(np.asarray(self.residuals, dtype=float))):
            raise ValueError(f"residuals must be finite: {self.residuals}")


@dataclass
class VerificationReport:
    check_name: str
    passed: bool
    trace: ConvergenceTrace
    thresholds: dict
    details: list = field(default_factory=list)
    seed: Optional[int] = None

    def to_json_dict(self) -> dict:
        slope = self.trace.fitted_slope
        return {
            "check": self.check_name,
            "pass": self.passed,
            "steps": list(self.trace.steps),
            "residuals": list(self.trace.residuals),
            "slope": slope if np.isfinite(slope) else None,
            "seed": self.seed,
            "thresholds": self.thresholds,
            "details": self.details,
        }


def _envelope_trace(steps, residual_rows, floor: float) -> ConvergenceTrace:
    """Worst-case residual per step across many (point, direction) rows."""
    rows = np.asarray(residual_rows, dtype=float)
    envelope = rows.max(axis=0) if rows.size else np.zeros(len(steps))
    return ConvergenceTrace(tuple(steps), tuple(envelope.tolist()),
                            fit_decay(steps, envelope, floor))


def _passes_slope(slope: float, minimum: float) -> bool:
    return slope >= minimum  # inf means converged below the floor


# ---------------------------------------------------------------------------
# theorem1 suite: QFI = 4 * centered metric


def theorem1_check(family: StateFamily, points, directions,
                   eps_ladder=THEOREM1_LADDER, gap_tol: float = 1e-4,
                   slope_min: float = 1.5,
                   tol: Tolerances = DEFAULT_TOL) -> VerificationReport:
    """Certify |4 h(eps) - F| -> 0 at every (point, direction) pair.

    For each pair the centered metric is evaluated down the ladder without
    extrapolation (the decay itself is the evidence; slope ~2 expected),
    then the two finest rungs are Richardson-combined and the extrapolated
    gap must be within ``gap_tol * max(1, F)``. The slope floor scales
    with max(1, F) at 3e-8: dividing a squared distance by eps^2 = 1e-6
    at the finest default rung amplifies roundoff to about that size, and
    noise-pinned residuals must not masquerade as stalled convergence.
    The accuracy claim rests on the extrapolated gap, four orders below
    which the floor sits.
    """
    steps = tuple(eps_ladder)
    rows, details = [], []
    all_pass = True
    for x in points:
        vec = as_parameter_vector(x, family.param_count)
        for y in directions:
            direction = as_parameter_vector(y, family.param_count)
            qfi = qfi_directional(family, vec, direction, tol)
            scale = max(1.0, qfi)
            values = [_central_value(family, vec, direction, eps) for eps in steps]
            residuals = [abs(4.0 * v - qfi) for v in values]
            extrapolated = (4.0 * values[-1] - values[-2]) / 3.0
            gap = abs(4.0 * extrapolated - qfi)
            floor = 3e-8 * scale
            slope = fit_decay(steps, residuals, floor)
            ok = _passes_slope(slope, slope_min) and gap <= gap_tol * scale
            all_pass = all_pass and ok
            rows.append(residuals)
            details.append({
                "x": vec.tolist(), "y": direction.tolist(), "qfi": qfi,
                "residuals": residuals, "slope": slope if np.isfinite(slope) else None,
                "extrapolated_gap": gap, "pass": ok,
            })
    trace = _envelope_trace(steps, rows, 3e-8)
    return VerificationReport(
        check_name=f"theorem1:{family.name}", passed=all_pass, trace=trace,
        thresholds={"gap_tol": gap_tol, "slope_min": slope_min,
                    "slope_floor": "3e-8 * max(1, F)"},
        details=details)


# ---------------------------------------------------------------------------
# eq5 suite: 4 * forward metric = QFI + rank-change correction


def eq5_check(family: StateFamily, points, directions,
              eps_ladder=EQ5_LADDER, residual_tol: float = 1e-3,
              slope_min: float = 0.7, decay_ratio: float = 0.5,
              tol: Tolerances = DEFAULT_TOL) -> VerificationReport:
    """Certify |4 g(eps) - F - correction| -> 0 with a bounded finest rung.

    The QFI form and the algebraic correction are computed once per pair;
    only the forward metric walks the ladder. Residual floor 1e-7 *
    max(1, F): the forward scheme divides by eps^2 = 6.25e-8 at the finest
    default rung, so roundoff alone contributes ~1e-8.

    Decay is certified either by the fitted log-log slope or, when the
    signed residual crosses zero inside the ladder and poisons the fit, by
    total decay: finest residual at most ``decay_ratio`` times the
    coarsest. A residual that plateaus at a wrong correction fails both.
    """
    steps = tuple(eps_ladder)
    rows, details = [], []
    all_pass = True
    for x in points:
        vec = as_parameter_vector(x, family.param_count)
        for y in directions:
            direction = as_parameter_vector(y, family.param_count)
            qfi = qfi_directional(family, vec, direction, tol)
            corr = kernel_hessian_correction(family, vec, direction, tol)
            scale = max(1.0, qfi)
            residuals = [
                abs(4.0 * bures_metric_forward(family, vec, direction, eps, tol).value
                    - qfi - corr)
                for eps in steps
            ]
            floor = 1e-7 * scale
            slope = fit_decay(steps, residuals, floor)
            decayed = (_passes_slope(slope, slope_min)
                       or residuals[-1] <= decay_ratio * residuals[0])
            ok = decayed and residuals[-1] <= residual_tol * scale
            all_pass = all_pass and ok
            rows.append(residuals)
            details.append({
                "x": vec.tolist(), "y": direction.tolist(), "qfi": qfi,
                "correction": corr, "residuals": residuals,
                "slope": slope if np.isfinite(slope) else None, "pass": ok,
            })
    trace = _envelope_trace(steps, rows, 1e-7)
    return VerificationReport(
        check_name=f"eq5:{family.name}", passed=all_pass, trace=trace,
        thresholds={"residual_tol": residual_tol, "slope_min": slope_min,
                    "decay_ratio": decay_ratio,
                    "slope_floor": "1e-7 * max(1, F)"},
        details=details)


# ---------------------------------------------------------------------------
# theorem2 suite: fidelity trace expansion of Lambda + eps R + eps^2 S


def _split_kernel(lam: np.ndarray, tol: Tolerances):
    threshold = tol.rank * max(float(lam.max(initial=0.0)), 1.0)
    return lam > threshold


def theorem2_check(lam, r, s, eps_ladder=THEOREM2_LADDER,
                   slope_min: float = 0.7,
                   tol: Tolerances = DEFAULT_TOL) -> VerificationReport:
    """Certify Tr sqrt(sqrt(rho(eps)) rho(-eps) sqrt(rho(eps))) expansion.

    With rho(eps) = Lambda + eps R + eps^2 S, the prediction is
    Tr(Lambda) + eps^2 Tr(S) - eps^2 sum |R_kl|^2/(lambda_k + lambda_l)
    over pairs above the rank threshold; the remainder is o(eps^2), so
    |value - prediction|/eps^2 must decay. Hypotheses forced by positivity
    (kernel block of R zero, curvature S22 - R21 Lambda_+^{-1} R12 PSD)
    are checked up front; ladder rungs where rho(+-eps) fails PSD are
    dropped, and fewer than two usable rungs is an error.
    """
    lam = np.asarray(lam, dtype=float)
    if lam.ndim == 2:
        off = lam - np.diag(np.diagonal(lam))
        if np.abs(off).max(initial=0.0) > tol.herm:
            raise InvalidJet("base matrix must be diagonal")
        lam = np.diagonal(lam).real.copy()
    if np.any(lam < -tol.psd * max(float(np.abs(lam).max(initial=0.0)), 1.0)):
        raise InvalidJet(f"base eigenvalues must be nonnegative: {lam}")
    lam = np.clip(lam, 0.0, None)
    r = require_hermitian(r, tol)
    s = require_hermitian(s, tol)
    if r.shape[0] != len(lam) or s.shape[0] != len(lam):
        raise InvalidJet("R and S must match the base dimension")

    support = _split_kernel(lam, tol)
    kernel = ~support
    r_kk = r[np.ix_(kernel, kernel)]
    if r_kk.size and frobenius_norm(r_kk) > tol.jet_psd:
        raise InvalidJet(
            f"kernel block of R has norm {frobenius_norm(r_kk):.3e}; "
            "positivity of the expanded matrix requires it to vanish")
    lam_support = lam[support]
    r_sk = r[np.ix_(support, kernel)]
    if r_sk.size:
        curvature = hermitian_part(
            s[np.ix_(kernel, kernel)]
            - r_sk.conj().T @ (r_sk / lam_support[:, None]))
        if float(np.linalg.eigvalsh(curvature)[0]) < -tol.jet_psd:
            raise InvalidJet("kernel curvature S22 - R21 Lambda^-1 R12 is not PSD")

    base = np.diag(lam).astype(complex)
    trace_lam = float(lam.sum())
    trace_s = float(np.trace(s).real)
    denom = lam[:, None] + lam[None, :]
    threshold = tol.rank * max(float(lam.max(initial=0.0)), 1.0)
    mask = denom > threshold
    quotient = float(np.sum(np.where(mask, (r * np.conj(r)).real
                                     / np.where(mask, denom, 1.0), 0.0)))

    scale = max(trace_lam, 1.0)
    steps, residuals, details = [], [], []
    for eps in eps_ladder:
        rho_plus = base + eps * r + eps * eps * s
        rho_minus = base - eps * r + eps * eps * s
        min_eig = min(float(np.linalg.eigvalsh(rho_plus)[0]),
                      float(np.linalg.eigvalsh(rho_minus)[0]))
        if min_eig < -tol.psd * scale:
            details.append({"eps": eps, "skipped": "not PSD",
                            "min_eig": min_eig})
            continue
        value = trace_norm(matrix_sqrt(rho_plus, tol) @ matrix_sqrt(rho_minus, tol))
        prediction = trace_lam + eps * eps * (trace_s - quotient)
        residual = abs(value - prediction)
        steps.append(eps)
        residuals.append(residual / (eps * eps))
        details.append({"eps": eps, "value": value, "prediction": prediction,
                        "residual": residual, "scaled": residual / (eps * eps)})
    if len(steps) < 2:
        raise NotPsdOnLadder(
            f"only {len(steps)} ladder steps kept the matrix PSD; "
            "cannot certify decay")
    slope = fit_decay(steps, residuals)
    trace = ConvergenceTrace(tuple(steps), tuple(residuals), slope)
    return VerificationReport(
        check_name="theorem2", passed=_passes_slope(slope, slope_min),
        trace=trace,
        thresholds={"slope_min": slope_min, "slope_floor": SLOPE_FLOOR},
        details=details)


def random_theorem2_instance(rng, dim: int, rank: int,
                             tol: Tolerances = DEFAULT_TOL):
    """Seeded (Lambda, R, S) satisfying the expansion hypotheses.

    R is Hermitian with its kernel block zeroed; S is Hermitian shifted by
    beta times the kernel projector, with beta sized to make the kernel
    curvature PSD with a 0.1 margin.
    """
    if not 1 <= rank <= dim:
        raise ValueError(f"rank must be in [1, {dim}], got {rank}")
    lam = np.zeros(dim)
    lam[:rank] = np.sort(rng.uniform(0.5, 1.5, size=rank))[::-1]

    def hermitian(scale):
        g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        h = hermitian_part(g)
        return h * (scale / max(float(np.abs(np.linalg.eigvalsh(h)).max()), 1e-12))

    r = hermitian(0.3)
    r[rank:, rank:] = 0.0
    s = hermitian(0.3)
    if rank < dim:
        r_sk = r[:rank, rank:]
        curvature = hermitian_part(
            s[rank:, rank:] - r_sk.conj().T @ (r_sk / lam[:rank, None]))
        beta = max(0.0, -float(np.linalg.eigvalsh(curvature)[0])) + 0.1
        s[rank:, rank:] += beta * np.eye(dim - rank)
    return lam, r, s


# ---------------------------------------------------------------------------
# lemma3 suite: linear trace-sqrt expansion of a scaled block matrix


class CongruenceNoise:
    """o-term generator for the block expansion, PSD-preserving.

    Perturbs as (I + delta^exponent N) M0 (I + delta^exponent N)^dagger.
    Any exponent > 1 lands every block inside its allowed o-class: the
    top-left gains O(delta^exponent) = o(1), the off-diagonal blocks
    O(delta^exponent) = o(delta), and the bottom-right O(delta^(exponent+1))
    = o(delta^2). A congruence of a PSD matrix stays PSD, so the noisy
    matrix remains a valid square-root argument at every rung.
    """

    def __init__(self, generator, exponent: float = 2.0):
        if exponent <= 1:
            raise ValueError(
                f"exponent must exceed 1 to stay o(delta) in the off-diagonal "
                f"blocks, got {exponent}")
        self.generator = np.asarray(generator, dtype=complex)
        self.exponent = float(exponent)

    def apply(self, m0: np.ndarray, delta: float) -> np.ndarray:
        factor = np.eye(m0.shape[0], dtype=complex) \
            + delta ** self.exponent * self.generator
        return hermitian_part(factor @ m0 @ factor.conj().T)


def lemma3_check(a, b, c, delta_ladder=LEMMA3_LADDER, noise=None,
                 slope_min: float = 0.7, extend_max: int = 4,
                 tol: Tolerances = DEFAULT_TOL) -> VerificationReport:
    """Certify Tr sqrt of [[A, dB], [dB^H, d^2 C]] = Tr sqrt(A) + d * Tr
    sqrt(C - B^H A^{-1} B) + o(d).

    Residual divided by delta must decay. A must be strictly positive
    definite and the Schur complement PSD (PreconditionFail otherwise);
    under those, the unperturbed block matrix is PSD at every delta by
    congruence, and the optional noise generator preserves that.

    The signed residual can change sign inside the ladder when a noise
    term partially cancels the intrinsic linear coefficient; the rung
    nearest the crossing then drags the least-squares slope down even
    though the decay is genuine. Since the claim is asymptotic, the
    ladder is extended by halving (at most ``extend_max`` extra rungs)
    whenever the fit misses ``slope_min``; a true violation keeps failing
    because its residual does not decay at any depth.
    """
    a = require_hermitian(a, tol)
    c = require_hermitian(c, tol)
    b = np.asarray(b, dtype=complex)
    if b.shape != (a.shape[0], c.shape[0]):
        raise PreconditionFail(
            f"B must have shape ({a.shape[0]}, {c.shape[0]}), got {b.shape}")
    a_vals, a_vecs = np.linalg.eigh(a)
    if float(a_vals[0]) <= tol.pd * max(float(a_vals[-1]), 1.0):
        raise PreconditionFail(
            f"A must be strictly positive definite; min eigenvalue {a_vals[0]:.3e}")
    a_inv = (a_vecs / a_vals) @ a_vecs.conj().T
    schur = hermitian_part(c - b.conj().T @ a_inv @ b)
    schur_vals = np.linalg.eigvalsh(schur)
    if float(schur_vals[0]) < -tol.psd * max(float(schur_vals[-1]), 1.0):
        raise PreconditionFail(
            f"Schur complement C - B^H A^-1 B must be PSD; "
            f"min eigenvalue {schur_vals[0]:.3e}")

    base_term = float(np.sqrt(a_vals).sum())
    schur_term = float(np.sqrt(np.clip(schur_vals, 0.0, None)).sum())
    top, bottom = a.shape[0], c.shape[0]

    def rung(delta: float) -> dict:
        m = np.zeros((top + bottom, top + bottom), dtype=complex)
        m[:top, :top] = a
        m[:top, top:] = delta * b
        m[top:, :top] = delta * b.conj().T
        m[top:, top:] = delta * delta * c
        if noise is not None:
            m = noise.apply(m, delta)
        value = float(np.sqrt(np.clip(np.linalg.eigvalsh(m), 0.0, None)).sum())
        prediction = base_term + delta * schur_term
        residual = abs(value - prediction)
        return {"delta": delta, "value": value, "prediction": prediction,
                "residual": residual, "scaled": residual / delta}

    details = [rung(delta) for delta in delta_ladder]
    extended = 0
    while True:
        steps = [d["delta"] for d in details]
        residuals = [d["scaled"] for d in details]
        slope = fit_decay(steps, residuals)
        if _passes_slope(slope, slope_min) or extended >= extend_max:
            break
        extended += 1
        details.append(rung(steps[-1] / 2))
    trace = ConvergenceTrace(tuple(steps), tuple(residuals), slope)
    return VerificationReport(
        check_name="lemma3", passed=_passes_slope(slope, slope_min),
        trace=trace,
        thresholds={"slope_min": slope_min, "slope_floor": SLOPE_FLOOR,
                    "extended_rungs": extended},
        details=details)


def random_lemma3_instance(rng, top: int, bottom: int,
                           noise_exponent: float = 2.0):
    """Seeded (A, B, C, noise) with strictly PD A and PD Schur complement."""

    def gram(n, scale):
        g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        return scale * hermitian_part(g @ g.conj().T) / n

    a = gram(top, 0.5) + 0.3 * np.eye(top)
    b = 0.3 * (rng.normal(size=(top, bottom)) + 1j * rng.normal(size=(top, bottom)))
    a_vals, a_vecs = np.linalg.eigh(a)
    a_inv = (a_vecs / a_vals) @ a_vecs.conj().T
    c = hermitian_part(b.conj().T @ a_inv @ b) + gram(bottom, 0.3) \
        + 0.1 * np.eye(bottom)
    n = top + bottom
    generator = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    # fixed spectral norm: larger noise can cancel the intrinsic residual at
    # the coarsest rung, poisoning the slope fit with a preasymptotic dip
    generator *= 0.3 / spectral_norm(generator)
    return a, b, c, CongruenceNoise(generator, noise_exponent)


# ---------------------------------------------------------------------------
# suite drivers


def _sample_points(rng, family: StateFamily, count: int) -> list:
    radius = family.sample_radius
    return [rng.uniform(-radius, radius, size=family.param_count)
            for _ in range(count)]


def _sample_directions(rng, param_count: int, count: int) -> list:
    directions = []
    while len(directions) < count:
        y = rng.normal(size=param_count)
        norm = np.linalg.norm(y)
        if norm > 1e-3:
            directions.append(y / norm)
    return directions


def _suite_families(seed: int, tol: Tolerances, random_count: int = 10) -> list:
    families = [builtin_family(name, tol)
                for name in ("paper-example", "qubit-rotation",
                             "bloch-linear", "polynomial")]
    rng = np.random.default_rng(seed)
    for k in range(random_count):
        dim = int(rng.integers(2, 5))
        params = int(rng.integers(1, 3))
        families.append(random_polynomial_family(
            int(rng.integers(0, 2 ** 31)), dim=dim, params=params, tol=tol))
    return families


def suite_theorem1(seed: int, points_per_family: int = 20,
                   directions_per_point: int = 5,
                   tol: Tolerances = DEFAULT_TOL,
                   extra_families=()) -> list:
    rng = np.random.default_rng(seed)
    reports = []
    for family in _suite_families(seed, tol) + list(extra_families):
        points = _sample_points(rng, family, points_per_family)
        directions = _sample_directions(rng, family.param_count,
                                        directions_per_point)
        report = theorem1_check(family, points, directions, tol=tol)
        report.seed = seed
        reports.append(report)
    return reports


def suite_eq5(seed: int, points_per_family: int = 20,
              directions_per_point: int = 5,
              tol: Tolerances = DEFAULT_TOL,
              extra_families=()) -> list:
    rng = np.random.default_rng(seed)
    reports = []
    for family in _suite_families(seed, tol) + list(extra_families):
        points = _sample_points(rng, family, points_per_family)
        directions = _sample_directions(rng, family.param_count,
                                        directions_per_point)
        report = eq5_check(family, points, directions, tol=tol)
        report.seed = seed
        reports.append(report)
    # rank-changing points, where the correction term is actually nonzero
    special = [paper_example_family(tol)]
    special.append(random_rank_deficient_family(
        int(rng.integers(0, 2 ** 31)), dim=3, params=2, rank=2, tol=tol))
    special.append(random_rank_deficient_family(
        int(rng.integers(0, 2 ** 31)), dim=4, params=2, rank=3, tol=tol))
    for family in special:
        origin = [np.zeros(family.param_count)]
        directions = _sample_directions(rng, family.param_count,
                                        directions_per_point)
        report = eq5_check(family, origin, directions, tol=tol)
        report.check_name = f"eq5-rank-change:{family.name}"
        report.seed = seed
        reports.append(report)
    return reports


def suite_theorem2(seed: int, instances: int = 50,
                   tol: Tolerances = DEFAULT_TOL) -> list:
    # closed-form instance: value and prediction are both exactly 1 - eps^2
    lam = np.array([1.0, 0.0])
    r = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
    s = np.diag([0.0, 1.0]).astype(complex)
    closed = theorem2_check(lam, r, s, tol=tol)
    closed.check_name = "theorem2-closed-form"
    closed.seed = seed
    reports = [closed]
    rng = np.random.default_rng(seed)
    for k in range(instances):
        dim = int(rng.integers(2, 6))
        rank = int(rng.integers(1, dim))
        lam, r, s = random_theorem2_instance(rng, dim, rank, tol)
        report = theorem2_check(lam, r, s, tol=tol)
        report.check_name = f"theorem2-random-{k}"
        report.seed = seed
        report.details.insert(0, {"dim": dim, "rank": rank})
        reports.append(report)
    return reports


def suite_lemma3(seed: int, instances: int = 50,
                 tol: Tolerances = DEFAULT_TOL) -> list:
    # scalar closed form: Tr sqrt M = sqrt(1 + 2 delta + 2 delta^2)
    scalar = lemma3_check(np.array([[1.0]]), np.array([[1.0]]),
                          np.array([[2.0]]), tol=tol)
    scalar.check_name = "lemma3-scalar"
    scalar.seed = seed
    # block-diagonal case is exact at every delta
    rng = np.random.default_rng(seed)
    a0, _, c0, _ = random_lemma3_instance(rng, 2, 2)
    exact = lemma3_check(a0, np.zeros((2, 2)), c0, tol=tol)
    exact.check_name = "lemma3-block-diagonal"
    exact.seed = seed
    reports = [scalar, exact]
    for k in range(instances):
        top = int(rng.integers(1, 4))
        bottom = int(rng.integers(1, 4))
        a, b, c, noise = random_lemma3_instance(rng, top, bottom)
        report = lemma3_check(a, b, c, noise=noise, tol=tol)
        report.check_name = f"lemma3-random-{k}"
        report.seed = seed
        report.details.insert(0, {"top": top, "bottom": bottom,
                                  "noise_exponent": noise.exponent})
        reports.append(report)
    return reports


SUITES = ("theorem1", "theorem2", "lemma3", "eq5")


def run_suite(name: str, seed: int, tol: Tolerances = DEFAULT_TOL,
              extra_families=()) -> list:
    """Run one named suite, or every suite for ``"all"``.

    ``extra_families`` join the family population of the family-based
    suites (theorem1 and eq5); the jet-based suites ignore them.
    """
    if name == "theorem1":
        return suite_theorem1(seed, tol=tol, extra_families=extra_families)
    if name == "theorem2":
        return suite_theorem2(seed, tol=tol)
    if name == "lemma3":
        return suite_lemma3(seed, tol=tol)
    if name == "eq5":
        return suite_eq5(seed, tol=tol, extra_families=extra_families)
    if name == "all":
        reports = []
        for suite in SUITES:
            reports.extend(run_suite(suite, seed, tol, extra_families))
        return reports
    raise ValueError(f"unknown suite {name!r}; expected one of {SUITES + ('all',)}")
