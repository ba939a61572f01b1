"""Information metrics and numerical certification for density-matrix families.

The package computes the quantum Fisher information matrix of a
parametrized density matrix, compares it against finite-difference
discretizations of the fidelity-based metric, and quantifies the
correction that appears when the state's rank changes. A verification
harness certifies the underlying expansions as measured convergence
rates. See the ``qfi-bures`` CLI for the command-line surface.
"""

from .correction import (SupportDecomposition, decompose, eq5_residual,
                         kernel_hessian_correction, correction_matrix)
from .errors import (BoundaryPoint, DomainViolation, InvalidJet,
                     JetInconsistent, NegativeEigenvalue, NonHermitian,
                     NotPositiveDefinite, NotPsdOnLadder, PreconditionFail,
                     QfiBuresError, ShapeMismatch, SolverFailure,
                     StepTooSmall)
from .linalg import (DensityMatrix, Spectrum, eigh, matrix_sqrt, mirsky_gap,
                     trace_norm, unitarily_invariant_norm)
from .metrics import (CrbReport, MetricEstimate, bures_distance,
                      bures_distance_squared, bures_metric_central,
                      bures_metric_forward, crb, fidelity, metric_matrix,
                      qfi_directional, qfi_matrix)
from .models import (BUILTIN_NAMES, DirectionalJet, StateFamily,
                     builtin_family, family_from_config, load_model,
                     polynomial_family, random_polynomial_family,
                     random_rank_deficient_family)
from .report import SWEEP_COLUMNS, compute_report, sweep_rows
from .sqrt_calculus import (SqrtDerivativeContext, frechet_sqrt,
                            frechet_sqrt_order_n, taylor_sqrt)
from .tolerances import DEFAULT_TOL, Tolerances
from .verify import (SUITES, CongruenceNoise, ConvergenceTrace,
                     VerificationReport, eq5_check, fit_decay, lemma3_check,
                     run_suite, theorem1_check, theorem2_check)

__version__ = "0.1.0"

__all__ = [
    "BUILTIN_NAMES", "BoundaryPoint", "CongruenceNoise", "ConvergenceTrace",
    "CrbReport", "DEFAULT_TOL", "DensityMatrix", "DirectionalJet",
    "DomainViolation", "InvalidJet", "JetInconsistent", "MetricEstimate",
    "NegativeEigenvalue", "NonHermitian", "NotPositiveDefinite",
    "NotPsdOnLadder", "PreconditionFail", "QfiBuresError", "SUITES",
    "ShapeMismatch", "SolverFailure", "Spectrum", "SqrtDerivativeContext",
    "StateFamily", "StepTooSmall", "SupportDecomposition", "SWEEP_COLUMNS",
    "Tolerances", "VerificationReport", "bures_distance",
    "bures_distance_squared", "bures_metric_central", "bures_metric_forward",
    "builtin_family", "compute_report", "correction_matrix", "crb",
    "decompose", "eigh", "eq5_check", "eq5_residual", "family_from_config",
    "fidelity", "fit_decay", "frechet_sqrt", "frechet_sqrt_order_n",
    "kernel_hessian_correction", "lemma3_check", "load_model",
    "matrix_sqrt", "metric_matrix", "mirsky_gap", "polynomial_family",
    "qfi_directional", "qfi_matrix", "random_polynomial_family",
    "random_rank_deficient_family", "run_suite", "sweep_rows",
    "taylor_sqrt", "theorem1_check", "theorem2_check", "trace_norm",
    "unitarily_invariant_norm",
]
