"""Exception types raised across the package."""


class QfiBuresError(Exception):
    """Base class for all package-specific errors."""


class ShapeMismatch(QfiBuresError, ValueError):
    """Operands do not have compatible shapes."""


class NonHermitian(QfiBuresError, ValueError):
    """Matrix violates Hermitian symmetry beyond tolerance."""


class SolverFailure(QfiBuresError, RuntimeError):
    """An underlying dense solver did not converge."""


class NegativeEigenvalue(QfiBuresError, ValueError):
    """Matrix has an eigenvalue below the accepted negative window."""


class NotPositiveDefinite(QfiBuresError, ValueError):
    """Matrix is not strictly positive definite."""


class DomainViolation(QfiBuresError, ValueError):
    """A state family produced an invalid density matrix."""


class BoundaryPoint(QfiBuresError, ValueError):
    """Parameter point too close to the domain boundary for the stencil."""


class StepTooSmall(QfiBuresError, ValueError):
    """Finite-difference step below the roundoff floor."""


class JetInconsistent(QfiBuresError, ValueError):
    """Directional jet violates the positivity block structure."""


class InvalidJet(QfiBuresError, ValueError):
    """Expansion data fed to a verification check violate its hypotheses."""


class NotPsdOnLadder(QfiBuresError, ValueError):
    """No step of the requested ladder keeps the perturbed matrix PSD."""


class PreconditionFail(QfiBuresError, ValueError):
    """A verification check's hypothesis is violated; message names it."""
