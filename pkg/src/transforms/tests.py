"""Tests for the transforms app."""
from collections.abc import Callable
from fractions import Fraction

from factory.random import randgen
from series.core import Series
from series.core import componentwise_min
from series.core import evaluate
from series.core import exponent_leq
from series.core import truncate
from series.factories import PolynomialFactory
from utils.tests import MonoForgeTestCase

from .elementary import INF
from .elementary import BlowUp
from .elementary import ElementaryTransform
from .elementary import Ramification
from .elementary import Shear
from .elementary import TransformPath
from .elementary import Tschirnhausen
from .errors import InvalidTransformError
from .factories import BlowUpFactory
from .factories import RamificationFactory
from .factories import ShearFactory
from .factories import TschirnhausenFactory
from .factories import random_path
from .schema import path_from_list
from .schema import path_to_list
from .substitution import apply
from .substitution import compose_path
from .substitution import critical_variable
from .substitution import evaluate_path_at
from .substitution import path_divisor
from .substitution import star_apply

X = Series.variable(2, 1)
Y = Series.variable(2, 2)
X1 = Series.variable(1, 1)


class TestElementaryTransforms(MonoForgeTestCase):
    """Tests for the action of single transforms."""

    def test_apply(self) -> None:
        """Test one substitution of each kind."""
        assert apply(Tschirnhausen(X1), Y - X) == Y
        assert apply(BlowUp(2, 1, Fraction(0)), Y**2 - X**2) == X**2 * Y**2 - X**2
        assert apply(Ramification(1, 2), X1) == X1**2
        assert apply(Shear(2, (Fraction(1),)), X * Y) == X * Y + Y**2

    def test_critical_variable(self) -> None:
        """Test that only blow-ups have a critical variable, and λ = ∞ swaps the roles."""
        assert critical_variable(BlowUp.of(2, 1, Fraction(5))) == 1
        infinite = BlowUp.of(2, 1, INF)
        assert infinite == BlowUp(1, 2, Fraction(0))
        assert critical_variable(infinite) == 2
        assert critical_variable(Tschirnhausen(X1)) is None
        assert critical_variable(Shear(2, (Fraction(3),))) is None
        assert critical_variable(Ramification(1, 3, -1)) is None

    def test_star_apply(self) -> None:
        """Test that blow-ups multiply by the critical variable and the rest do not."""
        assert star_apply(BlowUp(2, 1, Fraction(0)), Y**2 - X**2) == X**3 * Y**2 - X**3
        assert star_apply(Tschirnhausen(X1), Y - X) == Y
        assert star_apply(Ramification(1, 2), X1) == X1**2

    def test_invalid_transforms(self) -> None:
        """Test the constructor checks and the variable count checks."""
        with self.assertRaises(InvalidTransformError):
            BlowUp(1, 1)
        with self.assertRaises(InvalidTransformError):
            Shear(3, (Fraction(1),))
        with self.assertRaises(InvalidTransformError):
            Ramification(1, 0)
        with self.assertRaises(InvalidTransformError):
            Tschirnhausen(1 + X1)
        with self.assertRaises(InvalidTransformError):
            apply(BlowUp(3, 1), Y)

    def test_homomorphism_and_truncation(self) -> None:
        """Test that pullback respects products and commutes with truncation for every kind."""
        makers: dict[str, Callable[[], ElementaryTransform]] = {
            "blowup": BlowUpFactory.build,
            "tschirnhausen": lambda: TschirnhausenFactory.build(i=randgen.choice([2, 3])),
            "shear": ShearFactory.build,
            "ramification": RamificationFactory.build,
        }
        for kind, make in makers.items():
            for _ in range(200):
                nu = make()
                f = PolynomialFactory.build(nvars=3, degree=3, count=3)
                g = PolynomialFactory.build(nvars=3, degree=3, count=3)
                assert apply(nu, f * g) == apply(nu, f) * apply(nu, g), (kind, nu.describe())
                assert apply(nu, f + g) == apply(nu, f) + apply(nu, g), (kind, nu.describe())
                n = randgen.randint(0, 4)
                assert apply(nu, truncate(f, n)) == truncate(apply(nu, f), n), (kind, nu.describe())


class TestPaths(MonoForgeTestCase):
    """Tests for composed paths."""

    def test_compose_path(self) -> None:
        """Test the identity path, an inverse pair and a two step path."""
        f = Y**2 - X**3
        assert compose_path(TransformPath(), f) == f
        pair = [Tschirnhausen(X1), Tschirnhausen(-X1)]
        assert compose_path(pair, Y) == Y
        steps = [Ramification(1, 2), BlowUp(2, 1, Fraction(0))]
        assert compose_path(steps, f) == X**2 * Y**2 - X**6

    def test_evaluate_path_at(self) -> None:
        """Test the image of a point under a composed map."""
        p = [Fraction(1, 2), Fraction(1, 4)]
        assert evaluate_path_at([BlowUp(2, 1, Fraction(1))], p) == [Fraction(1, 2), Fraction(5, 8)]
        assert evaluate_path_at([], p) == p
        assert evaluate_path_at([Ramification(1, 3, -1)], [2, 1]) == [-8, 1]

    def test_path_and_point_agree(self) -> None:
        """Test that F ∘ ρ evaluated at q equals F evaluated at ρ(q), and that nonzero F stays nonzero."""
        for _ in range(50):
            path = random_path()
            f = PolynomialFactory.build(nvars=3, degree=2, count=3)
            q = [Fraction(randgen.randint(-4, 4), 5) for _ in range(3)]
            pulled = compose_path(path, f)
            image = evaluate_path_at(path, q)
            assert evaluate(pulled, q) == evaluate(f, image), path.describe()
            assert f.is_zero() or not pulled.is_zero(), path.describe()

    def test_path_divisor(self) -> None:
        """Test the monomial a path is known to leave as a factor of a pulled back series."""
        assert path_divisor([Ramification(1, 2), BlowUp(2, 1, Fraction(0))], [(0, 2)]) == (2, 2)
        assert path_divisor([BlowUp(2, 1, Fraction(3))], [(1, 2)]) == (3, 0)
        assert path_divisor([Tschirnhausen(X1)], [(1, 1)]) == (1, 0)
        assert path_divisor([Shear(2, (Fraction(1),))], [(1, 1), (0, 3)]) == (0, 1)
        for _ in range(100):
            path = random_path()
            f = PolynomialFactory.build(nvars=3, degree=3, count=3)
            pulled = compose_path(path, f)
            if f.is_zero() or pulled.is_zero():
                continue
            assert exponent_leq(path_divisor(path, f.support), componentwise_min(pulled.support)), path.describe()

    def test_path_codec(self) -> None:
        """Test that a path survives the JSON format."""
        path = TransformPath(
            (BlowUp(2, 1, Fraction(1, 2)), Tschirnhausen(X1), Shear(2, (Fraction(-1),)), Ramification(1, 2, -1))
        )
        assert path_from_list(path_to_list(path)) == path
