"""Conversions between exact polynomials and sympy expressions."""
from collections.abc import Sequence
from fractions import Fraction

import sympy
from series.core import Series


def symbols_for(nvars: int, names: Sequence[str] | None = None) -> list[sympy.Symbol]:
    """Real sympy symbols, named after the variables when names are given."""
    labels = list(names) if names is not None else [f"z{k}" for k in range(1, nvars + 1)]
    return [sympy.Symbol(label, real=True) for label in labels]


def to_sympy(f: Series, symbols: Sequence[sympy.Symbol]) -> sympy.Expr:
    """The polynomial f as a sympy expression."""
    total = sympy.Integer(0)
    for exp, coef in f.items():
        term = sympy.Rational(coef.numerator, coef.denominator)
        for s, e in zip(symbols, exp, strict=True):
            if e:
                term *= s**e
        total += term
    return total


def from_sympy(expr: sympy.Expr, symbols: Sequence[sympy.Symbol]) -> Series:
    """An exact polynomial from a sympy expression with rational coefficients."""
    poly = sympy.Poly(sympy.expand(expr), *symbols, domain=sympy.QQ)
    return Series(len(symbols), {exp: Fraction(str(coef)) for exp, coef in poly.terms()})


def irreducible_factors(expr: sympy.Expr, symbols: Sequence[sympy.Symbol]) -> list[sympy.Expr]:
    """The non constant irreducible factors over ℚ, without multiplicity."""
    _, factors = sympy.factor_list(sympy.expand(expr), *symbols)
    return [factor for factor, _ in factors]


def drop_factors(
    f: Series,
    positive: Sequence[Series],
    symbols: Sequence[sympy.Symbol],
) -> Series:
    """Remove from f every irreducible factor shared, up to sign, with a series in positive.

    Used on polynomials known to be nonzero on the region of interest, so the
    zero set there does not change.
    """
    if f.is_zero():
        return f
    known = [p for g in positive if not g.is_zero() for p in irreducible_factors(to_sympy(g, symbols), symbols)]
    _, factors = sympy.factor_list(sympy.expand(to_sympy(f, symbols)), *symbols)
    kept = sympy.Integer(1)
    for factor, multiplicity in factors:
        if any(sympy.expand(factor - p) == 0 or sympy.expand(factor + p) == 0 for p in known):
            continue
        kept *= factor**multiplicity
    return from_sympy(kept, symbols)
