"""Tests for the hsets app."""
from fractions import Fraction

import numpy as np
from factory.random import randgen
from monomialize.tree import TreeConfig
from series.core import Series
from series.core import evaluate
from series.factories import NormalGermFactory
from series.normality import NormalCertificate
from series.normality import certificate_of
from series.schema import series_to_dict
from transforms.elementary import INF
from transforms.elementary import TransformPath
from transforms.substitution import evaluate_path_at
from utils.tests import MonoForgeTestCase

from .components import ChartUnion
from .components import count_components_sampled
from .components import count_mask_components
from .errors import BoundTooSmallError
from .errors import HSetError
from .errors import MissingCertificateError
from .lifting import lift_graphs
from .parametrize import ParametrizeConfig
from .parametrize import certify_radius
from .parametrize import chart_covers
from .parametrize import parametrize
from .sets import HBasicSet
from .sets import Sign
from .sets import SubQuadrant
from .signs import membership_quadrants
from .signs import sign_on_quadrant

X = Series.variable(2, 1)
Y = Series.variable(2, 2)
X1 = Series.variable(1, 1)
ONE = Fraction(1)
EIGHTH = Fraction(1, 8)


def _cert(alpha: tuple[int, ...], constant: int) -> NormalCertificate:
    return NormalCertificate(alpha, Series.constant(len(alpha), constant))


class TestSigns(MonoForgeTestCase):
    """Tests for signs of normal germs on sub-quadrants."""

    def test_sign_on_quadrant(self) -> None:
        """Test odd exponents on negative factors, constant germs and zero factors."""
        assert sign_on_quadrant(_cert((2, 1), 3), SubQuadrant.from_signs([1, -1])) == Sign.NEG
        assert sign_on_quadrant(_cert((0, 0), -2), SubQuadrant.from_signs([-1, 1])) == Sign.NEG
        assert sign_on_quadrant(_cert((1, 1), 1), SubQuadrant.from_signs([0, 1])) == Sign.ZERO
        assert sign_on_quadrant(_cert((0, 2), -1), SubQuadrant.from_signs([0, -1])) == Sign.NEG

    def test_sign_matches_evaluation(self) -> None:
        """Test predicted signs against exact evaluation at points of certified quadrants."""
        for _ in range(100):
            nvars = randgen.randint(1, 3)
            f = NormalGermFactory.build(nvars=nvars)
            cert = certificate_of(f)
            assert cert is not None
            quadrant = SubQuadrant.from_signs([randgen.choice([-1, 0, 1]) for _ in range(nvars)])
            sized = certify_radius([cert], quadrant, 16)
            assert sized is not None, f.pretty()
            expected = sign_on_quadrant(cert, quadrant)
            for halving in range(4):
                for point in sized.scaled(Fraction(1, 2**halving)).sample(randgen, 25):
                    value = evaluate(f, point)
                    assert (value > 0) - (value < 0) == expected, (f.pretty(), point)

    def test_membership_quadrants(self) -> None:
        """Test the quadrant lists of sets defined by normal germs."""
        inside = membership_quadrants(HBasicSet((ONE,), None, (X1 + X1**2,)))
        assert [q.describe() for q in inside] == ["(+)"]
        inside = membership_quadrants(HBasicSet((ONE, ONE), X, (Y,)))
        assert [q.describe() for q in inside] == ["(0, +)"]
        assert membership_quadrants(HBasicSet((ONE,), None, (-(1 + X1),))) == []

    def test_membership_needs_certificates(self) -> None:
        """Test that a set with a non normal inequality is refused."""
        with self.assertRaises(MissingCertificateError):
            membership_quadrants(HBasicSet((ONE, ONE), None, (Y - X,)))


class TestParametrize(MonoForgeTestCase):
    """Tests for charts of H-basic sets."""

    def test_half_line(self) -> None:
        """Test that {x > 0} is a single identity chart covering every sample."""
        result = parametrize(HBasicSet((ONE,), None, (X1,)), ParametrizeConfig(TreeConfig(), grid=64))
        (chart,) = result.charts
        assert chart.path == TransformPath()
        assert chart.quadrant.describe() == "(+)"
        assert chart.quadrant.factors[0].radius == 1
        assert result.coverage.samples == 8
        assert result.coverage.fraction == 1.0
        assert chart_covers(chart, [Fraction(1, 2)])
        assert not chart_covers(chart, [Fraction(-1, 2)])

    def test_cone(self) -> None:
        """Test that the seeded charts of {y² − x² > 0} cover the set and see two components."""
        a = HBasicSet((ONE, ONE), None, (Y**2 - X**2,))
        tree = TreeConfig(lambda_seed=(Fraction(1), Fraction(-1), INF))
        result = parametrize(a, ParametrizeConfig(tree, delta=EIGHTH, grid=512))
        assert len(result.charts) >= 4
        assert all(len(chart.path) == 1 for chart in result.charts)
        assert result.coverage.samples > 0
        assert result.coverage.fraction >= 0.99
        assert count_components_sampled(a.shrink(EIGHTH), 512) == 2

    def test_empty_set(self) -> None:
        """Test that {−1 > 0} has no chart."""
        a = HBasicSet((ONE,), None, (Series.constant(1, -1),))
        result = parametrize(a, ParametrizeConfig(TreeConfig(), grid=16))
        assert result.charts == []
        assert result.coverage.samples == 0
        assert result.coverage.fraction == 1.0

    def test_chart_images_inside_set(self) -> None:
        """Test that sampled points of every chart map into Δ_r and into the set."""
        sets = {
            "y² − x² > 0": HBasicSet((ONE, ONE), None, (Y**2 - X**2,)),
            "y − x² > 0": HBasicSet((ONE, ONE), None, (Y - X**2,)),
            "xy − x³ > 0": HBasicSet((ONE, ONE), None, (X * Y - X**3,)),
        }
        tree = TreeConfig(lambda_seed=(Fraction(1), Fraction(-1), INF))
        for name, a in sets.items():
            result = parametrize(a, ParametrizeConfig(tree, grid=16))
            assert result.charts, name
            for chart in result.charts:
                for q in chart.quadrant.sample(randgen, 50):
                    p = evaluate_path_at(chart.path, q)
                    assert a.in_polydisk(p), (name, chart.path.describe(), q)
                    assert a.contains(p), (name, chart.path.describe(), q)

    def test_radius_keeps_chart_in_polydisk(self) -> None:
        """Test that only the variable dividing a coordinate image is shrunk."""
        cert = certificate_of(X**2 * Y * (Y + 2))
        assert cert is not None
        quadrant = SubQuadrant.from_signs([1, 1])
        image = X + X * Y
        sized = certify_radius([cert], quadrant, 8, [(X, ONE), (image, ONE)])
        assert sized is not None
        assert [f.radius for f in sized.factors] == [Fraction(1, 2), ONE]
        assert certify_radius([cert], quadrant, 8) == quadrant.with_radius(ONE)

    def test_certify_radius(self) -> None:
        """Test that the radius halves until the unit keeps its sign."""
        cert = certificate_of(X1 * (1 - 3 * X1))
        assert cert is not None
        sized = certify_radius([cert], SubQuadrant.from_signs([1]), 8)
        assert sized is not None
        assert sized.factors[0].radius == Fraction(1, 4)
        assert certify_radius([cert], SubQuadrant.from_signs([1]), 1) is None


class TestLifting(MonoForgeTestCase):
    """Tests for the graph lifting of H-basic sets."""

    def test_lift_half_line(self) -> None:
        """Test that {x > 0} lifts to {y − x = 0, y > 0}."""
        lifted = lift_graphs(HBasicSet((ONE,), None, (X1,)), [Fraction(2)])
        assert not lifted.has_y0
        assert lifted.nvars == 2
        assert lifted.equations == (Y - X,)
        assert lifted.presentation.polyradius == (ONE, Fraction(2))
        assert lifted.presentation.ineqs == (Y,)
        assert lifted.lift_point([Fraction(1, 2)]) == [Fraction(1, 2), Fraction(1, 2)]
        assert lifted.presentation.contains(lifted.lift_point([Fraction(1, 2)]))
        assert lifted.project([Fraction(1, 3), Fraction(1, 3)]) == [Fraction(1, 3)]
        assert lifted.checks[0].method == "coefficient-sum"

    def test_coefficient_sum_bound(self) -> None:
        """Test that x² + 3xy on Δ_(1,1) accepts s = 4 and rejects s = 2 with a witness near a corner."""
        a = HBasicSet((ONE, ONE), None, (X**2 + 3 * X * Y,))
        lifted = lift_graphs(a, [Fraction(4)], grid=64)
        assert lifted.checks[0].coefficient_sum == 4
        with self.assertRaises(BoundTooSmallError) as ctx:
            lift_graphs(a, [Fraction(2)], grid=64)
        witness = ctx.exception.details["witness"]
        assert all(abs(abs(v) - 1) < 0.05 for v in witness)

    def test_equation_adds_y0(self) -> None:
        """Test that an equation gets its own graph variable, pinned to zero."""
        lifted = lift_graphs(HBasicSet((ONE,), Series.zero(1), ()), [ONE])
        assert lifted.has_y0
        assert lifted.nvars == 2
        assert lifted.presentation.ineqs == ()
        assert lifted.presentation.contains([Fraction(1, 2), Fraction(0)])
        assert not lifted.presentation.contains([Fraction(1, 2), Fraction(1, 4)])

    def test_bound_count(self) -> None:
        """Test that every lifted series needs one bound."""
        with self.assertRaises(HSetError):
            lift_graphs(HBasicSet((ONE,), None, (X1,)), [])


class TestComponents(MonoForgeTestCase):
    """Tests for sampled connected components."""

    def test_two_intervals(self) -> None:
        """Test {x² > 1/4} on Δ_(1)."""
        a = HBasicSet((ONE,), None, (X1**2 - Fraction(1, 4),))
        assert count_components_sampled(a, 64) == 2

    def test_half_line_and_empty(self) -> None:
        """Test a connected set and an empty one."""
        assert count_components_sampled(HBasicSet((ONE,), None, (X1,)), 64) == 1
        assert count_components_sampled(HBasicSet((ONE,), None, (Series.constant(1, -1),)), 64) == 0

    def test_chart_union(self) -> None:
        """Test components of the union of chart images."""
        result = parametrize(HBasicSet((ONE,), None, (X1,)), ParametrizeConfig(TreeConfig(), grid=16))
        union = ChartUnion(tuple(result.charts), (ONE,))
        assert count_components_sampled(union, 16) == 1

    def test_mask_components(self) -> None:
        """Test that cells touching only at a corner are separate components."""
        diagonal = np.eye(3, dtype=bool)
        assert count_mask_components(diagonal) == 3
        diagonal[0, 1] = True
        assert count_mask_components(diagonal) == 2
        assert count_mask_components(np.zeros((2, 2, 2), dtype=bool)) == 0
        assert count_mask_components(np.ones((2, 2, 2), dtype=bool)) == 1

    def test_bad_grid(self) -> None:
        """Test that the grid resolution is positive."""
        with self.assertRaises(HSetError):
            count_components_sampled(HBasicSet((ONE,), None, (X1,)), 0)


class TestHSetsApi(MonoForgeTestCase):
    """Tests for the hsets API."""

    def test_sign(self) -> None:
        """Test the sign endpoint."""
        unit = series_to_dict(Series.constant(2, 3), ["x", "y"])
        payload = {"certificate": {"alpha": [2, 1], "unit_constant": "3", "unit": unit}, "quadrant": ["+", "-"]}
        result = self.post_json("/hsets/sign/", payload)["monoforge_response"]
        assert result == {"quadrant": "(+, −)", "sign": "−"}

    def test_sign_rejects_non_unit(self) -> None:
        """Test that a certificate without unit constant is a validation error."""
        unit = series_to_dict(X, ["x", "y"])
        payload = {"certificate": {"alpha": [0, 0], "unit": unit}, "quadrant": ["+", "+"]}
        self.post_json("/hsets/sign/", payload, status=422)

    def test_parametrize(self) -> None:
        """Test the parametrize endpoint on {x > 0}."""
        payload = {
            "set": {"polyradius": ["1"], "ineqs": [series_to_dict(X1, ["x"])]},
            "config": {"grid": 16},
        }
        result = self.post_json("/hsets/parametrize/", payload)["monoforge_response"]
        assert len(result["charts"]) == 1
        assert result["charts"][0]["signs"] == "(+)"
        assert result["coverage"]["fraction"] == 1.0
