"""Errors raised by the hsets app."""
from utils.errors import MonoForgeError


class HSetError(MonoForgeError):
    """Base class for hsets errors."""


class MissingCertificateError(HSetError):
    """Raised when a defining series of a pulled back set has no normality certificate."""


class BoundTooSmallError(HSetError):
    """Raised when a lifting bound does not dominate |g_i| on the polydisk.

    details["witness"] holds a point where the bound fails.
    """
