"""Numerical tolerance configuration shared by every module.

All operations accept a :class:`Tolerances` instance explicitly; there is no
mutable global state. ``DEFAULT_TOL`` is a frozen module-level default that
tests may replace with tightened or loosened copies via
:func:`dataclasses.replace`.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    """Collection of numerical thresholds.

    Relative thresholds are understood relative to ``max(1, scale)`` where
    ``scale`` is the natural magnitude of the quantity being tested (largest
    eigenvalue, Frobenius norm, ...).
    """

    #: accepted relative Hermitian-symmetry violation before rejection
    herm: float = 1e-8
    #: eigendecomposition reconstruction / unitarity acceptance
    recon: float = 1e-10
    #: relative threshold below which an eigenvalue counts as zero (rank cut)
    rank: float = 1e-12
    #: window of negative eigenvalues clamped to zero on PSD matrices
    psd: float = 1e-10
    #: accepted deviation of a density-matrix trace from one
    trace: float = 1e-10
    #: relative strict-positive-definiteness margin
    pd: float = 1e-10
    #: slack on the fidelity landing inside [0, 1]
    fid: float = 1e-12
    #: lower-bound slack on metric estimates (Richardson may dip below zero)
    metric: float = 1e-8
    #: step for first-order central differences of state families
    fd_step_first: float = 1e-5
    #: step for second-order stencils of state families
    fd_step_second: float = 1e-4
    #: block invariants of directional jets (derivatives carry FD noise)
    jet_psd: float = 1e-8
    #: lower-bound slack on the kernel curvature correction
    corr: float = 1e-8
    #: accepted negative eigenvalue on the assembled QFI matrix
    qfi_psd: float = 1e-10
    #: condition-number limit beyond which the QFI is reported singular
    cond_max: float = 1e12
    #: smallest metric step before roundoff dominates the quotient
    eps_floor: float = 1e-7
    #: residuals below this floor are excluded from slope fits
    slope_floor: float = 1e-12


DEFAULT_TOL = Tolerances()
