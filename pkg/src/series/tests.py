"""Tests for the series app."""
from fractions import Fraction

import numpy as np
from factory.random import randgen
from utils.tests import MonoForgeTestCase

from .core import Series
from .core import add
from .core import compose
from .core import componentwise_min
from .core import content_normalized
from .core import derivative
from .core import monomial_divide
from .core import mul
from .core import product
from .core import truncate
from .errors import DimensionMismatchError
from .errors import NotAUnitError
from .errors import NotDivisibleError
from .errors import RegularityError
from .errors import UndefinedNormalityError
from .factories import NormalGermFactory
from .factories import PolynomialFactory
from .factories import RegularSeriesFactory
from .normality import Normal
from .normality import NotNormal
from .normality import UnknownAtTruncation
from .normality import is_normal
from .normality import unit_inverse
from .numeric import evaluate_grid
from .schema import series_to_dict
from .weierstrass import formal_root_in_xn
from .weierstrass import qk_polynomials
from .weierstrass import regularity_order
from .weierstrass import substitute_last
from .weierstrass import weierstrass_coeffs
from .weierstrass import weierstrass_reassemble

X = Series.variable(2, 1)
Y = Series.variable(2, 2)
X1 = Series.variable(1, 1)


class TestArithmetic(MonoForgeTestCase):
    """Tests for addition, multiplication and monomial division."""

    def test_add(self) -> None:
        """Test cancellation, plain sums and truncation discipline."""
        assert add(X, -X).is_zero()
        assert add(1 + X, Y) == Series(2, {(0, 0): 1, (1, 0): 1, (0, 1): 1})
        f = Series(1, {(2,): 1}, trunc=3)
        g = Series(1, {(4,): 1}, trunc=3)
        assert g.is_zero()
        assert add(f, g) == f

    def test_add_mismatched_variables(self) -> None:
        """Test that series in different numbers of variables do not add."""
        with self.assertRaises(DimensionMismatchError):
            add(X, X1)

    def test_mul(self) -> None:
        """Test products, including cancellation under a truncation bound."""
        assert mul(1 + X, 1 - X) == 1 - X * X
        f = Series(1, {(0,): 1, (1,): 1, (2,): 1}, trunc=2)
        assert mul(f, 1 - X1) == Series(1, {(0,): 1}, trunc=2)
        assert mul(X, Y) == Series.monomial(2, (1, 1))
        assert product([], nvars=2) == Series.constant(2, 1)

    def test_monomial_divide(self) -> None:
        """Test division by a variable and the not-divisible error."""
        assert monomial_divide(X**2 * Y + X * Y**2, 1) == X * Y + Y**2
        assert monomial_divide(X, 1) == Series.constant(2, 1)
        with self.assertRaises(NotDivisibleError) as ctx:
            monomial_divide(X + Y, 1)
        assert ctx.exception.details["exponent"] == [0, 1]

    def test_truncated_division_lowers_bound(self) -> None:
        """Test that dividing a truncation loses one degree of knowledge."""
        f = Series(2, {(1, 0): 1, (2, 1): 3}, trunc=5)
        assert monomial_divide(f, 1).trunc == 4

    def test_composed_truncation(self) -> None:
        """Test that a truncated image loses only the precision its order allows."""
        h = Series(2, {(1, 0): 1}, trunc=4)
        pulled = compose(Y**2, [X, Y + h])
        assert pulled.trunc == 5
        assert pulled == Series(2, {(2, 0): 1, (1, 1): 2, (0, 2): 1}, trunc=5)
        assert compose(X, [X, Y + h]) == X
        assert compose(Series(2, {(0, 1): 1}, trunc=7), [X, X * Y]).trunc == 7

    def test_pretty(self) -> None:
        """Test the human readable form."""
        f = Series(2, {(0, 2): 3, (1, 1): -2, (0, 0): -1})
        assert f.pretty() == "3y² − 2xy − 1"
        assert Series(1, {(1,): Fraction(1, 2)}, trunc=4).pretty() == "(1/2)x + O(5)"

    def test_content_normalized(self) -> None:
        """Test scaling to coprime integers with a positive leading term."""
        f = Series(2, {(0, 2): Fraction(-3, 2), (1, 1): 1, (0, 0): Fraction(1, 2)})
        assert content_normalized(f) == Series(2, {(0, 2): 3, (1, 1): -2, (0, 0): -1})

    def test_evaluate_grid(self) -> None:
        """Test float evaluation on numpy arrays."""
        f = X**2 - Y
        xs, ys = np.meshgrid([0.0, 0.5], [1.0, 2.0], indexing="ij")
        assert np.allclose(evaluate_grid(f, [xs, ys]), xs**2 - ys)


class TestNormality(MonoForgeTestCase):
    """Tests for is_normal and unit inversion."""

    def test_normal(self) -> None:
        """Test a normal series and its certificate."""
        result = is_normal(3 * X**2 * Y + X**3 * Y)
        assert isinstance(result, Normal)
        assert result.certificate.alpha == (2, 1)
        assert result.certificate.unit_constant == 3
        assert result.certificate.reconstruct() == 3 * X**2 * Y + X**3 * Y

    def test_not_normal(self) -> None:
        """Test series whose minimal exponents are incomparable."""
        assert isinstance(is_normal(Y + X), NotNormal)
        result = is_normal(X**2 + X * Y + Y**2)
        assert isinstance(result, NotNormal)
        assert len(result.witness) == 2

    def test_unknown_at_truncation(self) -> None:
        """Test that a truncation hides terms which could break normality."""
        result = is_normal(Series(2, {(1, 0): 1}, trunc=1))
        assert isinstance(result, UnknownAtTruncation)
        assert result.alpha == (1, 0)

    def test_known_divisor(self) -> None:
        """Test that a truncated series is normal once its least monomial is known to divide it."""
        f = Series(2, {(1, 1): 1, (2, 1): 2}, trunc=4)
        assert isinstance(is_normal(f), UnknownAtTruncation)
        assert isinstance(is_normal(f, (1, 0)), UnknownAtTruncation)
        result = is_normal(f, (1, 1))
        assert isinstance(result, Normal)
        assert result.certificate.alpha == (1, 1)
        assert result.certificate.unit_constant == 1
        assert isinstance(is_normal(Series(2, {(1, 0): 1, (0, 1): 1}, trunc=4), (0, 0)), NotNormal)

    def test_zero_is_undefined(self) -> None:
        """Test that the zero series has no normality verdict."""
        with self.assertRaises(UndefinedNormalityError):
            is_normal(Series.zero(2))

    def test_unit_inverse(self) -> None:
        """Test the geometric series, constants and a two variable unit."""
        assert unit_inverse(1 - X1, 3) == Series(1, {(k,): 1 for k in range(4)}, trunc=3)
        assert unit_inverse(Series.constant(1, 2), 5) == Series.constant(1, Fraction(1, 2), trunc=5)
        expected = Series(2, {(0, 0): 1, (1, 0): -1, (0, 1): -1, (2, 0): 1, (1, 1): 2, (0, 2): 1}, trunc=2)
        assert unit_inverse(1 + X + Y, 2) == expected
        with self.assertRaises(NotAUnitError):
            unit_inverse(X, 3)

    def test_generated_normal_germs(self) -> None:
        """Test that X^α times a unit is always recognised, with α recovered."""
        for _ in range(50):
            f = NormalGermFactory.build()
            result = is_normal(f)
            assert isinstance(result, Normal), f.pretty()
            assert result.certificate.reconstruct() == f

    def test_product_normal_iff_factors_normal(self) -> None:
        """Test that a product of polynomials is normal exactly when every factor is."""

        def oracle(f: Series) -> bool:
            return f.coefficient(componentwise_min(f.support)) != 0

        for _ in range(500):
            nvars = randgen.randint(1, 3)
            factors = [
                PolynomialFactory.build(nvars=nvars, degree=randgen.randint(1, 4), count=randgen.randint(1, 3))
                for _ in range(randgen.randint(1, 3))
            ]
            whole = product(factors)
            all_normal = all(isinstance(is_normal(f), Normal) for f in factors)
            assert all_normal == isinstance(is_normal(whole), Normal)
            assert all_normal == all(oracle(f) for f in factors)
            assert oracle(whole) == isinstance(is_normal(whole), Normal)


class TestWeierstrass(MonoForgeTestCase):
    """Tests for regularity, the coefficient split and the formal root."""

    def test_regularity_order(self) -> None:
        """Test orders read off F(0, Y)."""
        assert regularity_order(Y**2 - X**3) == 2
        assert regularity_order(X * Y) is None
        assert regularity_order(1 + X) == 0

    def test_weierstrass_coeffs(self) -> None:
        """Test the split into a unit and lower coefficients."""
        unit, lower = weierstrass_coeffs(Y**2 - X**3, 2)
        assert unit == Series.constant(2, 1)
        assert lower == [Series.zero(1), -(X1**3)]
        f = (1 + X) * Y**2 + X * Y + X**2
        unit, lower = weierstrass_coeffs(f, 2)
        assert unit == 1 + X
        assert lower == [X1, X1**2]
        assert weierstrass_reassemble(unit, lower) == f
        unit, lower = weierstrass_coeffs(1 + X, 0)
        assert unit == 1 + X
        assert lower == []

    def test_weierstrass_needs_matching_order(self) -> None:
        """Test that the split refuses the wrong order."""
        with self.assertRaises(RegularityError):
            weierstrass_coeffs(Y**2, 1)

    def test_qk_polynomials(self) -> None:
        """Test the homogeneous parts in the dehomogenized variable."""
        assert qk_polynomials(X * Y, 2) == X1
        assert qk_polynomials(X**2 + Y**2, 2) == X1**2 + 1
        assert qk_polynomials(Y, 1) == Series.constant(1, 1)

    def test_formal_root(self) -> None:
        """Test exact roots of the (d−1)-th derivative."""
        assert formal_root_in_xn(Y**2 + 2 * X * Y, 2, 16) == -X1
        assert formal_root_in_xn(Y**2, 2, 16) == Series.zero(1)
        assert formal_root_in_xn(Y**3 + 3 * X * Y**2, 3, 16) == -X1

    def test_formal_root_needs_positive_order(self) -> None:
        """Test that order zero has no root to solve for."""
        with self.assertRaises(RegularityError):
            formal_root_in_xn(1 + X, 0, 4)

    def test_generated_regular_series(self) -> None:
        """Test reassembly and the root residual on random regular series at trunc 16."""
        for _ in range(100):
            d = randgen.randint(1, 4)
            f = RegularSeriesFactory.build(order=d, trunc=16)
            assert regularity_order(f) == d
            unit, lower = weierstrass_coeffs(f, d)
            assert unit.constant_term() != 0
            assert weierstrass_reassemble(unit, lower) == f
            root = formal_root_in_xn(f, d, 16)
            assert root.constant_term() == 0
            assert substitute_last(derivative(f, 2, d - 1), root).is_zero(), series_to_dict(f)

    def test_truncate(self) -> None:
        """Test that truncation only ever lowers the bound."""
        f = Series(1, {(1,): 1, (3,): 1})
        assert truncate(f, 2) == Series(1, {(1,): 1}, trunc=2)
        assert truncate(truncate(f, 2), 5).trunc == 2


class TestSeriesApi(MonoForgeTestCase):
    """Tests for the series API."""

    def test_normalize(self) -> None:
        """Test the normality endpoint on a normal series."""
        payload = series_to_dict(3 * X**2 * Y + X**3 * Y, ["x", "y"])
        data = self.post_json("/series/normalize/", payload)
        result = data["monoforge_response"]
        assert result["verdict"] == "normal"
        assert result["certificate"]["alpha"] == [2, 1]
        assert result["certificate"]["unit_constant"] == "3"

    def test_normalize_zero(self) -> None:
        """Test that the zero series is a domain error."""
        data = self.post_json("/series/normalize/", {"vars": ["x"], "trunc": "exact", "terms": []}, status=400)
        assert data["error"] == "series.UndefinedNormalityError"

    def test_malformed_payload(self) -> None:
        """Test that exponents of the wrong length are rejected."""
        payload = {"vars": ["x", "y"], "trunc": "exact", "terms": [{"exp": [1], "coef": "1"}]}
        data = self.post_json("/series/normalize/", payload, status=422)
        assert data["error"] == "validation"
