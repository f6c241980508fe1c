"""Errors raised by the transforms app."""
from utils.errors import MonoForgeError


class TransformError(MonoForgeError):
    """Base class for transform errors."""


class InvalidTransformError(TransformError):
    """Raised for malformed transforms or transforms that do not fit the variable count."""
