"""Normality certificates: deciding whether F = X^α·U with U a unit."""
from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import TypeAlias

from .core import Exponent
from .core import Series
from .core import componentwise_min
from .core import exponent_leq
from .core import monomial_quotient
from .core import truncate
from .errors import NotAUnitError
from .errors import UndefinedNormalityError

logger = logging.getLogger("monoforge")


@dataclass(frozen=True)
class NormalCertificate:
    """Witness that a series equals X^alpha times a unit."""

    alpha: Exponent
    unit: Series

    @property
    def unit_constant(self) -> Fraction:
        """The constant term of the unit, which is nonzero."""
        return self.unit.constant_term()

    def reconstruct(self) -> Series:
        """Return X^alpha · unit, shifting exponents so no truncated term is lost."""
        shift = sum(self.alpha)
        trunc = None if self.unit.trunc is None else self.unit.trunc + shift
        terms = {tuple(e + a for e, a in zip(exp, self.alpha, strict=True)): c for exp, c in self.unit.items()}
        return Series(self.unit.nvars, terms, trunc)


@dataclass(frozen=True)
class Normal:
    """The series is normal."""

    certificate: NormalCertificate


@dataclass(frozen=True)
class NotNormal:
    """The series is certainly not normal.

    witness is a pair of support exponents that are incomparable, or the
    componentwise minimum when it is missing from the support.
    """

    witness: tuple[Exponent, ...]


@dataclass(frozen=True)
class UnknownAtTruncation:
    """A hidden term above the truncation bound could break normality."""

    alpha: Exponent
    trunc: int


NormalityResult: TypeAlias = Normal | NotNormal | UnknownAtTruncation


def _incomparable_pair(support: tuple[Exponent, ...], alpha: Exponent) -> tuple[Exponent, ...]:
    minimal = [e for e in support if not any(o != e and exponent_leq(o, e) for o in support)]
    if len(minimal) >= 2:  # noqa: PLR2004
        return (minimal[0], minimal[1])
    return (alpha,)


def is_normal(f: Series, divisor: Sequence[int] | None = None) -> NormalityResult:
    """Decide normality of a series from its stored terms.

    The candidate exponent is the componentwise minimum α of the support.
    When α is missing from the support the series is not normal, whatever
    hides above the truncation bound. When α is present an exact series is
    normal, and so is a truncated series in one variable or with α = 0. In
    two or more variables a hidden term could be incomparable to α, unless
    X^α is known from elsewhere to divide the whole germ.

    Args:
        f: A nonzero series
        divisor: An exponent whose monomial is known to divide the germ f stands for
    Returns:
        Normal, NotNormal or UnknownAtTruncation
    Raises:
        UndefinedNormalityError: When f is the zero series
    """
    if f.is_zero():
        raise UndefinedNormalityError("normality of the zero series is undefined")
    support = f.support
    alpha = componentwise_min(support)
    if f.coefficient(alpha) == 0:
        return NotNormal(_incomparable_pair(support, alpha))
    if f.trunc is not None and any(alpha) and f.nvars > 1 and (divisor is None or tuple(divisor) != alpha):
        return UnknownAtTruncation(alpha, f.trunc)
    return Normal(NormalCertificate(alpha, monomial_quotient(f, alpha)))


def certificate_of(f: Series) -> NormalCertificate | None:
    """The normality certificate of f, None unless f is decided normal."""
    if f.is_zero():
        return None
    result = is_normal(f)
    return result.certificate if isinstance(result, Normal) else None


def unit_inverse(u: Series, n: int) -> Series:
    """Invert a unit up to total degree n.

    Uses the geometric series V = c⁻¹ Σ W^k with W = 1 − U/c.

    Args:
        u: A series with nonzero constant term c
        n: The total degree bound of the result
    Returns:
        V with U·V = 1 up to total degree n, truncated at min(n, trunc(U))
    Raises:
        NotAUnitError: When the constant term vanishes
    """
    c = u.constant_term()
    if c == 0:
        raise NotAUnitError("series has zero constant term", series=u.pretty())
    trunc = n if u.trunc is None else min(n, u.trunc)
    w = truncate(Series.constant(u.nvars, 1) - u.scale(1 / c), trunc)
    total = Series.constant(u.nvars, 1, trunc)
    power = Series.constant(u.nvars, 1, trunc)
    for _ in range(trunc):
        power = power * w
        if power.is_zero():
            break
        total = total + power
    return total.scale(1 / c)
