"""Exception types raised by the toolkit."""


class DiscriminationError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(DiscriminationError, ValueError):
    """An input matrix, vector or probability failed validation."""


class DimensionError(ValidationError):
    pass


class NotHermitian(ValidationError):
    pass


class NotPositiveSemidefinite(ValidationError):
    pass


class TraceError(ValidationError):
    pass


class EigensolverError(DiscriminationError, ArithmeticError):
    """The Hermitian eigensolver failed to converge."""


class StructureMismatch(DiscriminationError):
    """The problem does not have the structure a closed-form solver requires."""


class PriorsOutsideWindow(DiscriminationError):
    """The prior ratio lies outside the interval where the closed form holds."""


class InfeasibleProjection(DiscriminationError):
    """An optimizer iterate could not be projected onto a valid POVM."""


class InvalidPovm(DiscriminationError):
    """Outcome probabilities of a POVM do not form a distribution."""
