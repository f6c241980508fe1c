"""API schemas used across multiple apps."""
import re
from fractions import Fraction
from typing import Any

from ninja import Schema

RATIONAL_RE = re.compile(r"^-?\d+(/[1-9]\d*)?$")


def parse_rational(value: str) -> Fraction:
    """Parse a rational number written as "p" or "p/q".

    Args:
        value: The string to parse
    Returns:
        The exact value as a Fraction
    Raises:
        ValueError: When the string is not an integer or a fraction of integers
    """
    if not RATIONAL_RE.match(value):
        raise ValueError(f"not a rational number: {value!r}")
    return Fraction(value)


def format_rational(value: Fraction | int) -> str:
    """Format a rational as "p" or "p/q"."""
    return str(Fraction(value))


class ApiMessageSchema(Schema):
    """The schema used for all API responses which are just messages."""

    message: str = "OK"
    error: str | None = None
    details: dict[str, Any] | None = None


class ApiResponseSchema(ApiMessageSchema):
    """The schema used for all API responses which contain a monoforge_response object."""

    monoforge_response: Any
