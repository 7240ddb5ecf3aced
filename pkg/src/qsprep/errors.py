"""Exception types raised across the package."""


class QSPrepError(Exception):
    """Base class for all package errors."""


class ValidationError(QSPrepError, ValueError):
    """Input data failed validation."""


class ZeroNorm(ValidationError):
    pass


class NotNormalized(ValidationError):
    pass


class SplitOutOfRange(ValidationError):
    pass


class SparseTreeUnsupported(ValidationError):
    pass


class LengthMismatch(ValidationError):
    pass


class DimensionMismatch(ValidationError):
    pass


class UnloweredGate(QSPrepError):
    """A high-level gate reached a consumer that only accepts native gates."""


class TooWide(QSPrepError):
    """Circuit exceeds the configured simulation width."""
