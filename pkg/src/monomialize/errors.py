"""Errors raised while building and querying admissible trees."""
from utils.errors import MonoForgeError


class MonomializeError(MonoForgeError):
    """Base class for monomialize errors."""


class DepthExceededError(MonomializeError):
    """Raised when a branch grows past the configured depth bound.

    details["trace"] holds the termination measures recorded along the branch.
    """


class InconclusiveError(MonomializeError):
    """Raised when a would-be leaf cannot be certified at the current truncation."""


class MeasureError(MonomializeError):
    """Raised in debug mode when the termination measure fails to decrease."""


class UncoveredPointError(MonomializeError):
    """Raised when a point sits on an exceptional locus no expanded chart covers."""


class NotAFamilyError(MonomializeError):
    """Raised when expanding λ on a node that is not a blow-up family."""


class NonIntegerExponentError(MonomializeError):
    """Raised when exponent tuples handed to the toric linearization are not integral."""


class PrecisionExhaustedError(InconclusiveError):
    """Raised when terms the algorithm needs lie above the truncation reached at a node.

    A larger working truncation may show them, so monomialize retries with one.
    """
