"""Parametrized density-matrix families and their derivative data.

A family maps a real parameter vector x to a density matrix. Derivatives
come from analytic evaluators when the family provides them and from
central finite differences otherwise. The directional jet collects the
Taylor data of rho(x + eps*y):

    rho(x + eps*y) = rho0 + eps*rho1 + eps^2*rho2 + o(eps^2),

with rho1 the first directional derivative and rho2 half the second.
Built-in families live in a registry keyed by name; polynomial families
(coefficient matrices up to quadratic order) load from JSON and are
validated lazily at each evaluation point.
"""

from __future__ import annotations

import json

import numpy as np

from .errors import BoundaryPoint, DomainViolation, ShapeMismatch
from .jsonio import matrix_from_json
from .linalg import DensityMatrix, hermitian_part, spectral_norm
from .tolerances import DEFAULT_TOL, Tolerances


def as_parameter_vector(x, param_count: int) -> np.ndarray:
    vec = np.atleast_1d(np.asarray(x, dtype=float))
    if vec.ndim != 1 or len(vec) != param_count:
        raise ShapeMismatch(
            f"parameter vector has shape {vec.shape}, expected ({param_count},)"
        )
    if not np.all(np.isfinite(vec)):
        raise DomainViolation(f"parameter vector has non-finite entries: {vec}")
    return vec


class DirectionalJet:
    """Second-order Taylor data of a family along one direction."""

    __slots__ = ("state", "rho1", "rho2")

    def __init__(self, state: DensityMatrix, rho1: np.ndarray, rho2: np.ndarray):
        self.state = state
        self.rho1 = rho1
        self.rho2 = rho2

    @property
    def rho0(self) -> np.ndarray:
        return self.state.matrix

    def evaluate(self, eps: float) -> np.ndarray:
        """Quadratic model rho0 + eps*rho1 + eps^2*rho2 (not validated)."""
        return self.rho0 + eps * self.rho1 + eps * eps * self.rho2


class StateFamily:
    """Density-matrix family over an open box ``max_i |x_i| < box_radius``.

    ``evaluator`` maps a parameter vector to a raw matrix; every evaluation
    is validated through :class:`DensityMatrix`, so an invalid point raises
    ``DomainViolation`` no matter how it is reached. Analytic derivative
    callables are optional; missing ones fall back to central differences
    with steps ``tol.fd_step_first`` / ``tol.fd_step_second``, which
    requires the stencil to stay strictly inside the box (``BoundaryPoint``
    otherwise). ``sample_radius`` is advisory: a box known to be safely
    inside the validity region, used by sweep defaults and tests.

    Immutable after construction; evaluation is pure, so instances may be
    shared across threads.
    """

    def __init__(self, name: str, dim: int, param_count: int, evaluator,
                 derivative=None, second_derivative=None,
                 box_radius: float = np.inf, sample_radius: float = 0.5,
                 tol: Tolerances = DEFAULT_TOL):
        self.name = name
        self.dim = int(dim)
        self.param_count = int(param_count)
        self.box_radius = float(box_radius)
        self.sample_radius = float(sample_radius)
        self.tol = tol
        self._evaluator = evaluator
        self._derivative = derivative
        self._second_derivative = second_derivative

    def __repr__(self) -> str:
        return (f"StateFamily({self.name!r}, dim={self.dim}, "
                f"params={self.param_count})")

    @property
    def has_analytic_derivatives(self) -> bool:
        return self._derivative is not None and self._second_derivative is not None

    def boundary_distance(self, x) -> float:
        """Distance from x to the domain boundary in the max norm."""
        vec = as_parameter_vector(x, self.param_count)
        if not np.isfinite(self.box_radius):
            return np.inf
        return self.box_radius - float(np.abs(vec).max(initial=0.0))

    def require_interior(self, x, margin: float = 0.0) -> None:
        dist = self.boundary_distance(x)
        if dist <= margin:
            raise BoundaryPoint(
                f"{self.name}: point at boundary distance {dist:.3e} "
                f"needs margin > {margin:.3e}"
            )

    def evaluate(self, x) -> DensityMatrix:
        vec = as_parameter_vector(x, self.param_count)
        raw = self._evaluator(vec)
        try:
            return DensityMatrix(raw, self.tol)
        except DomainViolation as exc:
            raise DomainViolation(f"{self.name} at x={vec}: {exc}") from exc

    def matrix(self, x) -> np.ndarray:
        return self.evaluate(x).matrix

    def derivative(self, x, i: int) -> np.ndarray:
        """First partial derivative of rho with respect to parameter i."""
        vec = as_parameter_vector(x, self.param_count)
        self._check_axis(i)
        if self._derivative is not None:
            self.require_interior(vec)
            return hermitian_part(np.asarray(self._derivative(vec, i), dtype=complex))
        h = self.tol.fd_step_first
        self.require_interior(vec, h)
        e = self._axis(i, h)
        return hermitian_part((self.matrix(vec + e) - self.matrix(vec - e)) / (2 * h))

    def second_derivative(self, x, i: int, j: int) -> np.ndarray:
        """Second partial derivative with respect to parameters i and j."""
        vec = as_parameter_vector(x, self.param_count)
        self._check_axis(i)
        self._check_axis(j)
        if self._second_derivative is not None:
            self.require_interior(vec)
            return hermitian_part(
                np.asarray(self._second_derivative(vec, i, j), dtype=complex))
        h = self.tol.fd_step_second
        self.require_interior(vec, h)
        if i == j:
            e = self._axis(i, h)
            stencil = self.matrix(vec + e) - 2 * self.matrix(vec) + self.matrix(vec - e)
            return hermitian_part(stencil / (h * h))
        ei, ej = self._axis(i, h), self._axis(j, h)
        stencil = (self.matrix(vec + ei + ej) - self.matrix(vec + ei - ej)
                   - self.matrix(vec - ei + ej) + self.matrix(vec - ei - ej))
        return hermitian_part(stencil / (4 * h * h))

    def directional_jet(self, x, y) -> DirectionalJet:
        """Taylor data of rho(x + eps*y) through second order."""
        vec = as_parameter_vector(x, self.param_count)
        direction = as_parameter_vector(y, self.param_count)
        if not np.any(direction):
            raise DomainViolation("jet direction must be nonzero")
        state = self.evaluate(vec)
        rho1 = np.zeros((self.dim, self.dim), dtype=complex)
        rho2 = np.zeros((self.dim, self.dim), dtype=complex)
        for i in range(self.param_count):
            if direction[i]:
                rho1 += direction[i] * self.derivative(vec, i)
        for i in range(self.param_count):
            for j in range(i, self.param_count):
                weight = direction[i] * direction[j]
                if i != j:
                    weight *= 2  # symmetric mixed partials counted once
                if weight:
                    rho2 += 0.5 * weight * self.second_derivative(vec, i, j)
        return DirectionalJet(state, hermitian_part(rho1), hermitian_part(rho2))

    def _axis(self, i: int, h: float) -> np.ndarray:
        e = np.zeros(self.param_count)
        e[i] = h
        return e

    def _check_axis(self, i: int) -> None:
        if not 0 <= i < self.param_count:
            raise ShapeMismatch(
                f"parameter index {i} out of range for {self.param_count} parameters")


# ---------------------------------------------------------------------------
# built-in families

_SIGMA_Z = np.diag([1.0 + 0j, -1.0 + 0j])


def paper_example_family(tol: Tolerances = DEFAULT_TOL) -> StateFamily:
    """diag(x^2, 1 - x^2): full rank except at x = 0, where the rank drops."""

    def rho(x):
        t = x[0] * x[0]
        return np.diag([t + 0j, 1 - t])

    def d1(x, i):
        return np.diag([2 * x[0] + 0j, -2 * x[0]])

    def d2(x, i, j):
        return np.diag([2.0 + 0j, -2.0])

    return StateFamily("paper-example", 2, 1, rho, d1, d2,
                       box_radius=1.0, sample_radius=0.7, tol=tol)


def qubit_rotation_family(tol: Tolerances = DEFAULT_TOL) -> StateFamily:
    """Pure state |+> rotated about z by angle theta; rank 1 everywhere."""

    def rho(x):
        phase = np.exp(-1j * x[0])
        return 0.5 * np.array([[1, phase], [np.conj(phase), 1]])

    def d1(x, i):
        r = rho(x)
        return -0.5j * (_SIGMA_Z @ r - r @ _SIGMA_Z)

    def d2(x, i, j):
        phase = np.exp(-1j * x[0])
        return 0.5 * np.array([[0, -phase], [-np.conj(phase), 0]])

    return StateFamily("qubit-rotation", 2, 1, rho, d1, d2,
                       sample_radius=1.5, tol=tol)


def bloch_linear_family(tol: Tolerances = DEFAULT_TOL) -> StateFamily:
    """(I + x sigma_z)/2: commuting family, eigenvalues (1 +- x)/2."""

    def rho(x):
        return 0.5 * (np.eye(2, dtype=complex) + x[0] * _SIGMA_Z)

    def d1(x, i):
        return 0.5 * _SIGMA_Z

    def d2(x, i, j):
        return np.zeros((2, 2), dtype=complex)

    return StateFamily("bloch-linear", 2, 1, rho, d1, d2,
                       box_radius=1.0, sample_radius=0.7, tol=tol)


def polynomial_family(c0, linear, quadratic, name: str = "polynomial",
                      box_radius: float = np.inf, sample_radius: float = 0.25,
                      tol: Tolerances = DEFAULT_TOL) -> StateFamily:
    """Family C0 + sum_i C_i x_i + sum_{i<=j} C_ij x_i x_j.

    ``quadratic`` maps index pairs (i, j) with i <= j to coefficient
    matrices. Coefficients must be Hermitian with matching shapes; the
    density-matrix constraints are only checked where the family is
    evaluated.
    """
    c0 = hermitian_part(np.asarray(c0, dtype=complex))
    dim = c0.shape[0]
    if c0.shape != (dim, dim):
        raise ShapeMismatch(f"c0 must be square, got shape {c0.shape}")
    params = len(linear)
    lin = []
    for i, c in enumerate(linear):
        c = np.asarray(c, dtype=complex)
        if c.shape != (dim, dim):
            raise ShapeMismatch(f"linear[{i}] shape {c.shape} != ({dim}, {dim})")
        lin.append(hermitian_part(c))
    quad = {}
    for (i, j), c in quadratic.items():
        if not (0 <= i <= j < params):
            raise ValueError(f"quadratic index pair ({i}, {j}) out of order or range")
        c = np.asarray(c, dtype=complex)
        if c.shape != (dim, dim):
            raise ShapeMismatch(f"quadratic[{i},{j}] shape {c.shape} != ({dim}, {dim})")
        quad[(i, j)] = hermitian_part(c)

    def rho(x):
        acc = c0.copy()
        for k in range(params):
            acc += x[k] * lin[k]
        for (i, j), c in quad.items():
            acc += x[i] * x[j] * c
        return acc

    def d1(x, k):
        acc = lin[k].copy()
        for (i, j), c in quad.items():
            if i == j == k:
                acc = acc + 2 * x[k] * c
            elif i == k:
                acc = acc + x[j] * c
            elif j == k:
                acc = acc + x[i] * c
        return acc

    def d2(x, k, l):
        lo, hi = min(k, l), max(k, l)
        c = quad.get((lo, hi))
        if c is None:
            return np.zeros((dim, dim), dtype=complex)
        return 2 * c if k == l else c

    return StateFamily(name, dim, params, rho, d1, d2, box_radius=box_radius,
                       sample_radius=sample_radius, tol=tol)


def _default_polynomial_family(tol: Tolerances = DEFAULT_TOL) -> StateFamily:
    # Fixed two-parameter qubit instance, strictly PD on the whole box:
    # spectral perturbation of c0 is below its 0.359 eigenvalue gap.
    c0 = np.array([[0.6, 0.1], [0.1, 0.4]])
    linear = [
        np.array([[0.1, 0.05j], [-0.05j, -0.1]]),
        np.array([[0.05, 0.1], [0.1, -0.05]]),
    ]
    quadratic = {
        (0, 0): np.diag([0.05, -0.05]),
        (0, 1): np.array([[0.0, 0.05], [0.05, 0.0]]),
        (1, 1): np.diag([-0.05, 0.05]),
    }
    return polynomial_family(c0, linear, quadratic, name="polynomial",
                             box_radius=0.5, sample_radius=0.25, tol=tol)


BUILTIN_NAMES = ("paper-example", "qubit-rotation", "bloch-linear", "polynomial")

_BUILTIN_FACTORIES = {
    "paper-example": paper_example_family,
    "qubit-rotation": qubit_rotation_family,
    "bloch-linear": bloch_linear_family,
    "polynomial": _default_polynomial_family,
}


def builtin_family(name: str, tol: Tolerances = DEFAULT_TOL) -> StateFamily:
    try:
        factory = _BUILTIN_FACTORIES[name]
    except KeyError:
        known = ", ".join(BUILTIN_NAMES)
        raise ValueError(f"unknown builtin family {name!r}; known: {known}") from None
    return factory(tol)


def family_from_config(config: dict, tol: Tolerances = DEFAULT_TOL) -> StateFamily:
    """Build a family from a parsed model description.

    Accepts {"type": "builtin", "name": ...} and {"type": "polynomial",
    "dim": ..., "params": ..., "c0": ..., "linear": [...], "quadratic":
    [[i, j, matrix], ...]} with matrices as nested [re, im] pairs.
    """
    kind = config.get("type")
    if kind == "builtin":
        return builtin_family(config["name"], tol)
    if kind != "polynomial":
        raise ValueError(f"unknown model type {kind!r}")
    dim = int(config["dim"])
    params = int(config["params"])
    c0 = matrix_from_json(config["c0"])
    linear = [matrix_from_json(entry) for entry in config["linear"]]
    if len(linear) != params:
        raise ValueError(f"expected {params} linear coefficients, got {len(linear)}")
    quadratic = {}
    for entry in config.get("quadratic", []):
        i, j, payload = int(entry[0]), int(entry[1]), entry[2]
        if (i, j) in quadratic:
            raise ValueError(f"duplicate quadratic coefficient for pair ({i}, {j})")
        quadratic[(i, j)] = matrix_from_json(payload)
    family = polynomial_family(c0, linear, quadratic, tol=tol)
    if family.dim != dim:
        raise ShapeMismatch(f"declared dim {dim} != coefficient dim {family.dim}")
    return family


def load_model(reference: str, tol: Tolerances = DEFAULT_TOL) -> StateFamily:
    """Resolve "builtin:NAME" or a JSON file path to a family."""
    if reference.startswith("builtin:"):
        return builtin_family(reference[len("builtin:"):], tol)
    with open(reference, "r", encoding="utf-8") as fh:
        config = json.load(fh)
    return family_from_config(config, tol)


# ---------------------------------------------------------------------------
# random family generators (seeded; used by verification suites and tests)


def _haar_unitary(rng, dim: int) -> np.ndarray:
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(g)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def _traceless_hermitian(rng, dim: int, scale: float) -> np.ndarray:
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    h = hermitian_part(g)
    h = h - (np.trace(h).real / dim) * np.eye(dim)
    return h * (scale / spectral_norm(h))


def random_polynomial_family(seed: int, dim: int = 3, params: int = 2,
                             tol: Tolerances = DEFAULT_TOL) -> StateFamily:
    """Seeded full-rank polynomial family, strictly PD for max|x_i| <= 0.25.

    The base spectrum is bounded below by 0.7/(1.3*dim) > 0.13 while the
    linear (0.1) and quadratic (0.05) coefficient norms keep the total
    perturbation on the sample box under 0.07, so positivity never binds.
    """
    rng = np.random.default_rng(seed)
    u = rng.uniform(0.7, 1.3, size=dim)
    v = _haar_unitary(rng, dim)
    c0 = (v * (u / u.sum())) @ v.conj().T
    linear = [_traceless_hermitian(rng, dim, 0.1) for _ in range(params)]
    quadratic = {(i, j): _traceless_hermitian(rng, dim, 0.05)
                 for i in range(params) for j in range(i, params)}
    return polynomial_family(c0, linear, quadratic,
                             name=f"random-polynomial-{seed}",
                             sample_radius=0.25, tol=tol)


def random_rank_deficient_family(seed: int, dim: int = 3, params: int = 2,
                                 rank: int = 2,
                                 tol: Tolerances = DEFAULT_TOL) -> StateFamily:
    """Seeded polynomial family whose rank drops to ``rank`` exactly at x = 0.

    Construction in a split basis (support block of size ``rank``, kernel
    block of size dim - rank), then conjugated by a Haar unitary:

      - linear coefficients vanish on the kernel block (a PSD family must
        have zero kernel-block first derivative at a rank-change point) but
        carry support-kernel coupling, so the Schur term in the kernel
        curvature is exercised;
      - each diagonal quadratic coefficient contributes 0.15*I on the
        kernel block, giving kernel eigenvalues ~0.15*|x|^2 that dominate
        the coupling-induced Schur correction (bounded by 0.04^2*params/
        lambda_min < 0.05) on the sample box, so the family stays PSD there.
    """
    if not 1 <= rank < dim:
        raise ValueError(f"rank must be in [1, {dim - 1}], got {rank}")
    rng = np.random.default_rng(seed)
    kernel = dim - rank
    gamma = 0.15

    u = rng.uniform(0.7, 1.3, size=rank)
    c0 = np.zeros((dim, dim), dtype=complex)
    c0[:rank, :rank] = np.diag(u / u.sum())

    def coupling(scale):
        block = rng.normal(size=(rank, kernel)) + 1j * rng.normal(size=(rank, kernel))
        block *= scale / spectral_norm(block)
        full = np.zeros((dim, dim), dtype=complex)
        full[:rank, rank:] = block
        full[rank:, :rank] = block.conj().T
        return full

    def support(scale):
        full = np.zeros((dim, dim), dtype=complex)
        full[:rank, :rank] = _traceless_hermitian(rng, rank, scale)
        return full

    linear = [support(0.1) + coupling(0.04) for _ in range(params)]
    quadratic = {}
    for i in range(params):
        for j in range(i, params):
            c = support(0.05) + coupling(0.03)
            if i == j:
                c[rank:, rank:] += gamma * np.eye(kernel)
                c[:rank, :rank] -= gamma * kernel / rank * np.eye(rank)
            quadratic[(i, j)] = c

    v = _haar_unitary(rng, dim)

    def rotate(m):
        return v @ m @ v.conj().T

    return polynomial_family(rotate(c0), [rotate(c) for c in linear],
                             {k: rotate(c) for k, c in quadratic.items()},
                             name=f"random-rank-deficient-{seed}",
                             sample_radius=0.25, tol=tol)
