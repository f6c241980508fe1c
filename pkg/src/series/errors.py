"""Errors raised by the series app."""
from utils.errors import MonoForgeError


class SeriesError(MonoForgeError):
    """Base class for series errors."""


class DimensionMismatchError(SeriesError):
    """Raised when series or exponents disagree on the number of variables."""


class NotDivisibleError(SeriesError):
    """Raised when a monomial division meets an exponent without the divisor."""


class UndefinedNormalityError(SeriesError):
    """Raised when asking whether the zero series is normal."""


class NotAUnitError(SeriesError):
    """Raised when inverting a series with zero constant term."""


class RegularityError(SeriesError):
    """Raised when a series is not regular of the requested order in the last variable."""
