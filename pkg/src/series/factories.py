"""Factory used in unit tests."""
from fractions import Fraction
from itertools import product
from typing import Any

import factory
import factory.fuzzy
from factory.random import randgen

from .core import Series
from .core import mul

Terms = dict[tuple[int, ...], Fraction]


def random_coefficient(bound: int = 9) -> Fraction:
    """A nonzero rational with numerator and denominator below bound."""
    numerator = 0
    while numerator == 0:
        numerator = randgen.randint(-bound, bound)
    return Fraction(numerator, randgen.randint(1, bound))


def random_terms(nvars: int, degree: int, count: int, *, constant: bool = True) -> Terms:
    """Up to count random terms of total degree at most degree."""
    exponents = [e for e in product(range(degree + 1), repeat=nvars) if sum(e) <= degree and (constant or any(e))]
    chosen = randgen.sample(exponents, min(count, len(exponents)))
    return {e: random_coefficient() for e in chosen}


class PolynomialFactory(factory.Factory):
    """Creates mock exact polynomials."""

    class Meta:
        """Meta options for PolynomialFactory."""

        model = Series

    class Params:
        """Shape of the generated polynomial."""

        degree = 3
        count = 4

    nvars = factory.fuzzy.FuzzyInteger(1, 3)
    terms = factory.LazyAttribute(lambda o: random_terms(o.nvars, o.degree, o.count))
    trunc = None


def _normal_terms(o: Any) -> Terms:  # noqa: ANN401
    monomial = Series.monomial(o.nvars, o.alpha)
    unit = Series(o.nvars, {**random_terms(o.nvars, 2, 3, constant=False), (0,) * o.nvars: random_coefficient()})
    return dict(mul(monomial, unit).items())


class NormalGermFactory(factory.Factory):
    """Creates mock normal germs X^α·U with U a polynomial unit."""

    class Meta:
        """Meta options for NormalGermFactory."""

        model = Series

    class Params:
        """The monomial exponent."""

        alpha = factory.LazyAttribute(lambda o: tuple(randgen.randint(0, 2) for _ in range(o.nvars)))

    nvars = factory.fuzzy.FuzzyInteger(1, 3)
    terms = factory.LazyAttribute(_normal_terms)
    trunc = None


def _regular_terms(o: Any) -> Terms:  # noqa: ANN401
    terms = {
        e: c
        for e, c in random_terms(o.nvars, o.order + 1, 6).items()
        if any(e[:-1]) or e[-1] > o.order
    }
    terms[(0,) * (o.nvars - 1) + (o.order,)] = random_coefficient()
    return terms


class RegularSeriesFactory(factory.Factory):
    """Creates mock series regular of a given order in the last variable."""

    class Meta:
        """Meta options for RegularSeriesFactory."""

        model = Series

    class Params:
        """The regularity order."""

        order = 2

    nvars = 2
    terms = factory.LazyAttribute(_regular_terms)
    trunc = None
