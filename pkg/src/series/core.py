"""Exact sparse multivariate power series truncated at a total degree bound.

A Series keeps its nonzero rational coefficients in a map keyed by exponent
tuples, iterated in graded lexicographic order. The truncation bound ``trunc``
is a natural number, or None for exact polynomials. Variable indices in the
public functions are 1-based, matching the way the coordinates are written.
"""
from __future__ import annotations

import logging
import math
from collections.abc import Iterable
from collections.abc import Iterator
from collections.abc import Mapping
from collections.abc import Sequence
from fractions import Fraction
from functools import reduce
from typing import Any
from typing import TypeAlias

from .errors import DimensionMismatchError
from .errors import NotDivisibleError
from .errors import SeriesError

logger = logging.getLogger("monoforge")

Exponent: TypeAlias = tuple[int, ...]
Coefficient: TypeAlias = Fraction | int
TermInput: TypeAlias = Mapping[Exponent, Coefficient] | Iterable[tuple[Exponent, Coefficient]]

SUPERSCRIPTS = str.maketrans("0123456789", "⁰¹²³⁴⁵⁶⁷⁸⁹")
MINUS = "−"


def grlex_key(exp: Exponent) -> tuple[int, Exponent]:
    """Sort key for graded lexicographic order."""
    return (sum(exp), exp)


def min_trunc(*truncs: int | None) -> int | None:
    """Return the smallest finite bound, or None when every input is exact."""
    finite = [t for t in truncs if t is not None]
    return min(finite) if finite else None


def default_names(nvars: int) -> list[str]:
    """Return x, y, z for up to three variables and x1..xn otherwise."""
    if nvars <= 3:  # noqa: PLR2004
        return ["x", "y", "z"][:nvars]
    return [f"x{i}" for i in range(1, nvars + 1)]


class Series:
    """An immutable truncated multivariate power series with rational coefficients."""

    __slots__ = ("_coeffs", "_nvars", "_trunc")

    def __init__(self, nvars: int, terms: TermInput = (), trunc: int | None = None) -> None:
        """Build a series, dropping zero coefficients and terms above the truncation bound.

        Args:
            nvars: The number of variables
            terms: A mapping or iterable of (exponent, coefficient) pairs, repeated exponents are summed
            trunc: The total degree bound, or None for an exact polynomial
        Raises:
            DimensionMismatchError: When an exponent has the wrong length
            SeriesError: When an exponent is negative or the bound is negative
        """
        if nvars < 0:
            raise SeriesError(f"negative variable count {nvars}")
        if trunc is not None and trunc < 0:
            raise SeriesError(f"negative truncation bound {trunc}")
        pairs = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Exponent, Fraction] = {}
        for raw_exp, coef in pairs:
            exp = tuple(int(e) for e in raw_exp)
            if len(exp) != nvars:
                raise DimensionMismatchError(
                    f"exponent {exp} does not have {nvars} entries", exponent=list(exp), nvars=nvars
                )
            if any(e < 0 for e in exp):
                raise SeriesError(f"negative exponent {exp}", exponent=list(exp))
            if trunc is not None and sum(exp) > trunc:
                continue
            acc[exp] = acc.get(exp, Fraction(0)) + Fraction(coef)
        self._nvars = nvars
        self._trunc = trunc
        self._coeffs = {exp: acc[exp] for exp in sorted(acc, key=grlex_key) if acc[exp] != 0}

    @classmethod
    def zero(cls, nvars: int, trunc: int | None = None) -> Series:
        """The zero series."""
        return cls(nvars, (), trunc)

    @classmethod
    def constant(cls, nvars: int, value: Coefficient, trunc: int | None = None) -> Series:
        """A constant series."""
        return cls(nvars, [((0,) * nvars, value)], trunc)

    @classmethod
    def monomial(cls, nvars: int, exp: Sequence[int], coef: Coefficient = 1, trunc: int | None = None) -> Series:
        """The series coef·X^exp."""
        return cls(nvars, [(tuple(exp), coef)], trunc)

    @classmethod
    def variable(cls, nvars: int, i: int, trunc: int | None = None) -> Series:
        """The coordinate X_i (1-based)."""
        return cls.monomial(nvars, unit_exponent(nvars, i), 1, trunc)

    @property
    def nvars(self) -> int:
        """The number of variables."""
        return self._nvars

    @property
    def trunc(self) -> int | None:
        """The total degree bound, None when exact."""
        return self._trunc

    @property
    def exact(self) -> bool:
        """True for polynomials known exactly."""
        return self._trunc is None

    @property
    def terms(self) -> tuple[tuple[Exponent, Fraction], ...]:
        """The (exponent, coefficient) pairs in graded lexicographic order."""
        return tuple(self._coeffs.items())

    @property
    def support(self) -> tuple[Exponent, ...]:
        """The exponents with nonzero coefficient in graded lexicographic order."""
        return tuple(self._coeffs)

    def coefficient(self, exp: Sequence[int]) -> Fraction:
        """The coefficient of X^exp, zero when absent."""
        return self._coeffs.get(tuple(exp), Fraction(0))

    def items(self) -> Iterator[tuple[Exponent, Fraction]]:
        """Iterate over (exponent, coefficient) pairs."""
        return iter(self._coeffs.items())

    def is_zero(self) -> bool:
        """True when no coefficient is stored."""
        return not self._coeffs

    def order(self) -> int | None:
        """The smallest total degree in the support, None for the zero series."""
        if not self._coeffs:
            return None
        return sum(next(iter(self._coeffs)))

    def degree(self) -> int | None:
        """The largest total degree in the support, None for the zero series."""
        if not self._coeffs:
            return None
        return sum(next(reversed(self._coeffs)))

    def constant_term(self) -> Fraction:
        """The coefficient of the constant monomial."""
        return self.coefficient((0,) * self._nvars)

    def depends_on(self, i: int) -> bool:
        """True when X_i (1-based) occurs in the support."""
        return any(exp[i - 1] for exp in self._coeffs)

    def with_trunc(self, trunc: int | None) -> Series:
        """The same terms under another truncation bound."""
        return Series(self._nvars, self._coeffs, trunc)

    def __eq__(self, other: object) -> bool:
        """Series are equal when variable count, terms and truncation agree."""
        if not isinstance(other, Series):
            return NotImplemented
        return self._nvars == other._nvars and self._trunc == other._trunc and self._coeffs == other._coeffs

    def __hash__(self) -> int:
        """Hash on the full value."""
        return hash((self._nvars, self._trunc, tuple(self._coeffs.items())))

    def __repr__(self) -> str:
        """Show the series in human form."""
        return f"Series({self.pretty()}, nvars={self._nvars}, trunc={self._trunc})"

    def __str__(self) -> str:
        """Human form."""
        return self.pretty()

    def __neg__(self) -> Series:
        """Negation."""
        return Series(self._nvars, {exp: -c for exp, c in self._coeffs.items()}, self._trunc)

    def __add__(self, other: Series | Coefficient) -> Series:
        """Coefficientwise sum under the smaller truncation bound."""
        other = self._coerce(other)
        _check_nvars(self, other)
        terms = [*self._coeffs.items(), *other._coeffs.items()]
        return Series(self._nvars, terms, min_trunc(self._trunc, other._trunc))

    def __radd__(self, other: Coefficient) -> Series:
        """Sum with a scalar on the left."""
        return self + other

    def __sub__(self, other: Series | Coefficient) -> Series:
        """Difference."""
        return self + (-self._coerce(other))

    def __rsub__(self, other: Coefficient) -> Series:
        """Difference with a scalar on the left."""
        return self._coerce(other) - self

    def __mul__(self, other: Series | Coefficient) -> Series:
        """Convolution product truncated at the smaller bound, or scalar product."""
        if not isinstance(other, Series):
            return self.scale(other)
        _check_nvars(self, other)
        trunc = min_trunc(self._trunc, other._trunc)
        acc: dict[Exponent, Fraction] = {}
        right = list(other._coeffs.items())
        for exp_a, coef_a in self._coeffs.items():
            deg_a = sum(exp_a)
            for exp_b, coef_b in right:
                if trunc is not None and deg_a + sum(exp_b) > trunc:
                    # graded order, so the rest of this row is above the bound as well
                    break
                exp = tuple(a + b for a, b in zip(exp_a, exp_b, strict=True))
                acc[exp] = acc.get(exp, Fraction(0)) + coef_a * coef_b
        return Series(self._nvars, acc, trunc)

    def __rmul__(self, other: Coefficient) -> Series:
        """Scalar product with the scalar on the left."""
        return self.scale(other)

    def __pow__(self, k: int) -> Series:
        """Power by repeated squaring."""
        if k < 0:
            raise SeriesError(f"negative power {k}")
        result = Series.constant(self._nvars, 1, self._trunc)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def scale(self, c: Coefficient) -> Series:
        """Multiply every coefficient by a rational."""
        c = Fraction(c)
        return Series(self._nvars, {exp: c * v for exp, v in self._coeffs.items()}, self._trunc)

    def _coerce(self, other: Series | Coefficient) -> Series:
        if isinstance(other, Series):
            return other
        return Series.constant(self._nvars, other)

    def pretty(self, names: Sequence[str] | None = None) -> str:
        """Render the series with the highest degree terms first, like 3y² − 2xy − 1."""
        names = list(names) if names is not None else default_names(self._nvars)
        ordered = sorted(self._coeffs.items(), key=lambda t: (sum(t[0]), t[0][::-1]), reverse=True)
        out = ""
        for pos, (exp, coef) in enumerate(ordered):
            monomial = "".join(
                name + (str(e).translate(SUPERSCRIPTS) if e > 1 else "")
                for name, e in zip(names, exp, strict=True)
                if e
            )
            magnitude = abs(coef)
            if not monomial:
                body = str(magnitude)
            elif magnitude == 1:
                body = monomial
            elif magnitude.denominator == 1:
                body = f"{magnitude}{monomial}"
            else:
                body = f"({magnitude}){monomial}"
            if pos == 0:
                out = f"{MINUS}{body}" if coef < 0 else body
            else:
                out += f" {MINUS} {body}" if coef < 0 else f" + {body}"
        if not out:
            out = "0"
        if self._trunc is not None:
            out += f" + O({self._trunc + 1})"
        return out


def unit_exponent(nvars: int, i: int) -> Exponent:
    """The exponent of X_i (1-based)."""
    if not 1 <= i <= nvars:
        raise DimensionMismatchError(f"variable index {i} out of range for {nvars} variables", index=i, nvars=nvars)
    return tuple(1 if k == i - 1 else 0 for k in range(nvars))


def exponent_leq(a: Sequence[int], b: Sequence[int]) -> bool:
    """The componentwise partial order, which is divisibility of monomials."""
    return all(x <= y for x, y in zip(a, b, strict=True))


def componentwise_min(exps: Iterable[Sequence[int]]) -> Exponent:
    """The componentwise minimum of a nonempty collection of exponents."""
    return tuple(reduce(lambda a, b: tuple(min(x, y) for x, y in zip(a, b, strict=True)), (tuple(e) for e in exps)))


def _check_nvars(f: Series, g: Series) -> None:
    if f.nvars != g.nvars:
        raise DimensionMismatchError(f"{f.nvars} variables against {g.nvars}", left=f.nvars, right=g.nvars)


def add(f: Series, g: Series) -> Series:
    """Sum of two series, truncated at the smaller bound."""
    return f + g


def mul(f: Series, g: Series) -> Series:
    """Product of two series, truncated at the smaller bound."""
    return f * g


def product(series: Sequence[Series], nvars: int | None = None) -> Series:
    """Product of a sequence of series, the constant 1 for an empty sequence."""
    if not series:
        if nvars is None:
            raise SeriesError("empty product needs a variable count")
        return Series.constant(nvars, 1)
    return reduce(mul, series)


def truncate(f: Series, n: int) -> Series:
    """Drop every term above total degree n."""
    return f.with_trunc(min_trunc(f.trunc, n))


def monomial_divide(f: Series, i: int) -> Series:
    """Divide by X_i (1-based).

    Args:
        f: A series vanishing on {X_i = 0}
        i: The variable index
    Returns:
        The quotient, with the truncation bound lowered by one when finite
    Raises:
        NotDivisibleError: When some exponent has no X_i factor
    """
    k = unit_exponent(f.nvars, i).index(1)
    for exp in f.support:
        if exp[k] == 0:
            raise NotDivisibleError(f"exponent {exp} is not divisible by X_{i}", exponent=list(exp), index=i)
    trunc = None if f.trunc is None else f.trunc - 1
    return Series(f.nvars, {exp[:k] + (exp[k] - 1,) + exp[k + 1 :]: c for exp, c in f.items()}, trunc)


def monomial_quotient(f: Series, alpha: Sequence[int]) -> Series:
    """Divide by the monomial X^alpha, which must divide every term."""
    alpha = tuple(alpha)
    for exp in f.support:
        if not exponent_leq(alpha, exp):
            raise NotDivisibleError(f"exponent {exp} is not divisible by X^{alpha}", exponent=list(exp))
    trunc = None if f.trunc is None else f.trunc - sum(alpha)
    if trunc is not None and trunc < 0:
        raise NotDivisibleError(f"X^{alpha} exceeds the truncation bound {f.trunc}", exponent=list(alpha))
    return Series(f.nvars, {tuple(e - a for e, a in zip(exp, alpha, strict=True)): c for exp, c in f.items()}, trunc)


def derivative(f: Series, i: int, times: int = 1) -> Series:
    """Partial derivative with respect to X_i (1-based), repeated `times` times."""
    k = unit_exponent(f.nvars, i).index(1)
    result = f
    for _ in range(times):
        trunc = None if result.trunc is None else max(result.trunc - 1, 0)
        result = Series(
            f.nvars,
            {exp[:k] + (exp[k] - 1,) + exp[k + 1 :]: c * exp[k] for exp, c in result.items() if exp[k]},
            trunc,
        )
    return result


def restrict(f: Series, m: int) -> Series:
    """View a series that only involves X_1..X_m as a series in m variables."""
    if m > f.nvars:
        raise DimensionMismatchError(f"cannot restrict {f.nvars} variables to {m}", nvars=f.nvars, m=m)
    for exp in f.support:
        if any(exp[m:]):
            raise DimensionMismatchError(f"exponent {exp} involves variables beyond X_{m}", exponent=list(exp), m=m)
    return Series(m, {exp[:m]: c for exp, c in f.items()}, f.trunc)


def embed(f: Series, n: int) -> Series:
    """View a series as a series in n ≥ nvars variables, appending unused coordinates."""
    if n < f.nvars:
        raise DimensionMismatchError(f"cannot embed {f.nvars} variables into {n}", nvars=f.nvars, n=n)
    pad = (0,) * (n - f.nvars)
    return Series(n, {exp + pad: c for exp, c in f.items()}, f.trunc)


def composed_trunc(f: Series, images: Sequence[Series]) -> int | None:
    """The total degree up to which f ∘ images is determined by the stored terms.

    Hidden terms of f land above f.trunc. A stored term X^a loses precision
    only through a truncated image g_k, whose error starts in degree
    trunc(g_k) + 1 and gets multiplied by factors of total order
    Σ a_j·ord(g_j) − ord(g_k).
    """
    bounds = [] if f.trunc is None else [f.trunc]
    orders: list[int | None] = []
    for img in images:
        orders.append(img.order() if not img.is_zero() else None if img.trunc is None else img.trunc + 1)
    for exp in f.support:
        used = [(k, e) for k, e in enumerate(exp) if e]
        if any(orders[k] is None for k, _ in used):
            continue
        weight = sum(e * (orders[k] or 0) for k, e in used)
        for k, _ in used:
            trunc = images[k].trunc
            if trunc is not None:
                bounds.append(trunc + weight - (orders[k] or 0))
    return min(bounds) if bounds else None


def compose(f: Series, images: Sequence[Series]) -> Series:
    """Substitute images[k] for X_{k+1} in f.

    When the result is truncated every image must have a zero constant term,
    so that each term of f lands in total degree at least its own.

    Args:
        f: The outer series
        images: One series per variable of f, all in the same number of variables
    Returns:
        The composed series, truncated where the stored terms stop determining it
    Raises:
        DimensionMismatchError: On a wrong image count or mixed variable counts
        SeriesError: When a truncated composition meets an image with a constant term
    """
    if len(images) != f.nvars:
        raise DimensionMismatchError(f"{len(images)} images for {f.nvars} variables", images=len(images))
    if not images:
        return f
    m = images[0].nvars
    if any(img.nvars != m for img in images):
        raise DimensionMismatchError("images live in different numbers of variables")
    trunc = composed_trunc(f, images)
    if trunc is not None and any(img.constant_term() != 0 for img in images):
        raise SeriesError("truncated substitution needs images without constant term")
    images = [img if trunc is None else img.with_trunc(trunc) for img in images]
    powers: dict[tuple[int, int], Series] = {}

    def power(k: int, e: int) -> Series:
        if (k, e) not in powers:
            powers[(k, e)] = Series.constant(m, 1, trunc) if e == 0 else power(k, e - 1) * images[k]
        return powers[(k, e)]

    acc: dict[Exponent, Fraction] = {}
    for exp, coef in f.items():
        term = Series.constant(m, coef, trunc)
        for k, e in enumerate(exp):
            if e:
                term = term * power(k, e)
        for t_exp, t_coef in term.items():
            acc[t_exp] = acc.get(t_exp, Fraction(0)) + t_coef
    return Series(m, acc, trunc)


def evaluate(f: Series, point: Sequence[Any]) -> Any:  # noqa: ANN401
    """Evaluate a polynomial or truncation at a point.

    Rational points give exact Fractions, floats give floats, and sympy
    numbers give sympy expressions.
    """
    if len(point) != f.nvars:
        raise DimensionMismatchError(f"point has {len(point)} coordinates for {f.nvars} variables")
    symbolic = any(hasattr(p, "free_symbols") for p in point)
    if symbolic:
        import sympy  # noqa: PLC0415

        total: Any = sympy.Integer(0)
        for exp, coef in f.items():
            total += sympy.Rational(coef.numerator, coef.denominator) * math.prod(
                (p**e for p, e in zip(point, exp, strict=True) if e), start=sympy.Integer(1)
            )
        return sympy.expand(total)
    total = Fraction(0) if all(isinstance(p, int | Fraction) for p in point) else 0.0
    for exp, coef in f.items():
        total += coef * math.prod(p**e for p, e in zip(point, exp, strict=True) if e)
    return total


def content_normalized(f: Series) -> Series:
    """Scale to coprime integer coefficients with a positive leading term."""
    if f.is_zero():
        return f
    lcm = math.lcm(*(c.denominator for _, c in f.items()))
    gcd = math.gcd(*(int(c * lcm) for _, c in f.items()))
    leading = max(f.items(), key=lambda t: (sum(t[0]), t[0][::-1]))[1]
    sign = -1 if leading < 0 else 1
    return f.scale(Fraction(sign * lcm, gcd))
