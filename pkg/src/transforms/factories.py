"""Factory used in unit tests."""
from fractions import Fraction

import factory
import factory.fuzzy
from factory.random import randgen
from series.core import Series
from series.factories import random_coefficient
from series.factories import random_terms

from .elementary import BlowUp
from .elementary import Ramification
from .elementary import Shear
from .elementary import Tschirnhausen
from .elementary import TransformPath


class BlowUpFactory(factory.Factory):
    """Creates mock blow-up charts on three variables."""

    class Meta:
        """Meta options for BlowUpFactory."""

        model = BlowUp

    i = factory.fuzzy.FuzzyInteger(1, 3)
    j = factory.LazyAttribute(lambda o: randgen.choice([k for k in (1, 2, 3) if k != o.i]))
    lam = factory.fuzzy.FuzzyChoice([Fraction(0), Fraction(1), Fraction(-1), Fraction(1, 2)])


class TschirnhausenFactory(factory.Factory):
    """Creates mock translations of the last of i variables."""

    class Meta:
        """Meta options for TschirnhausenFactory."""

        model = Tschirnhausen

    class Params:
        """The translated variable."""

        i = 2

    h = factory.LazyAttribute(lambda o: Series(o.i - 1, random_terms(o.i - 1, 2, 2, constant=False)))


class ShearFactory(factory.Factory):
    """Creates mock shears."""

    class Meta:
        """Meta options for ShearFactory."""

        model = Shear

    i = 3
    c = factory.LazyAttribute(lambda o: tuple(random_coefficient(3) for _ in range(o.i - 1)))


class RamificationFactory(factory.Factory):
    """Creates mock ramifications."""

    class Meta:
        """Meta options for RamificationFactory."""

        model = Ramification

    i = factory.fuzzy.FuzzyInteger(1, 3)
    d = factory.fuzzy.FuzzyInteger(2, 3)
    sign = factory.fuzzy.FuzzyChoice([1, -1])


def random_path(length: int = 3) -> TransformPath:
    """A random admissible path on three variables."""
    makers = [
        BlowUpFactory.build,
        lambda: TschirnhausenFactory.build(i=randgen.choice([2, 3])),
        ShearFactory.build,
        RamificationFactory.build,
    ]
    return TransformPath(tuple(randgen.choice(makers)() for _ in range(length)))
