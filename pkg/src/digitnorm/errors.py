"""Exception types shared across the package."""


class DigitNormError(Exception):
    """Base class for all package errors."""


class DomainError(DigitNormError, ValueError):
    """Argument outside the domain of a real function."""


class MalformedSeriesError(DigitNormError, ValueError):
    """A term-ratio series hit a zero denominator or an empty range."""


class InsufficientPrecisionError(DigitNormError):
    """Not enough precision to certify every requested digit.

    The caller should recompute the value with more bits (or supply more
    source digits) and try again.
    """


class StreamFormatError(DigitNormError, ValueError):
    """A digit file contains bytes that are not allowed."""


class ValidationError(DigitNormError):
    """A digit stream or count table failed a consistency check."""
