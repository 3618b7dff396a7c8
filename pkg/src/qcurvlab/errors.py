"""Exception types raised by the laboratory."""


class QCurvError(Exception):
    """Base class for all package-specific errors."""


class ValidationError(QCurvError):
    """Bad input: dimension mismatch, malformed config, violated precondition."""


class DimensionMismatchError(ValidationError):
    pass


class SolvabilityError(QCurvError):
    """Right-hand side not orthogonal to the kernel of the operator."""


class DegenerateSpectrumError(QCurvError):
    """An eigenvalue that must be nonzero vanishes (mu_k = 0 for some k >= 1)."""


class ResolutionError(QCurvError):
    """Band truncation too small for the requested quantity."""


class AliasingError(ResolutionError):
    """Quadrature/band cannot resolve a concentrated right-hand side."""


class SyntheticBackendError(QCurvError):
    """Operation requires the geometric sphere backend."""


class FatDiagonalError(ValidationError):
    """Point configuration violates the pairwise separation requirement."""


class OrthogonalityError(QCurvError):
    """Remainder field violates the required orthogonality conditions."""


class GradientConsistencyError(QCurvError):
    """The two gradient evaluation routes disagree beyond tolerance."""


class NonConvergenceError(QCurvError):
    """An iterative solver failed to converge."""


class ConventionError(QCurvError):
    """An integer-valued formula produced a non-integer (transcription guard)."""
