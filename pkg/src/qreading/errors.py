"""Exception types raised across the package."""


class QReadingError(Exception):
    """Base class for all package errors."""


class CapacityError(QReadingError):
    """A dense operator would exceed the configured maximum dimension."""


class TruncationError(QReadingError):
    """A Fock-space cutoff is too small for the requested tail tolerance."""


class NotPSDError(QReadingError, ValueError):
    """An operator expected to be positive semidefinite has a negative eigenvalue."""


class SpaceMismatchError(QReadingError, ValueError):
    """Operands live on different mode spaces."""


class UnsupportedModelError(QReadingError):
    """Reflectivity pair outside the identity-vs-thermal memory model."""


class ConsistencyError(QReadingError):
    """Two independent construction routes disagree."""


class ConfigError(QReadingError, ValueError):
    """Invalid sweep configuration."""
