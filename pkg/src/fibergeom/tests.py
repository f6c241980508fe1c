"""Tests for the fibergeom app."""
from fractions import Fraction

import numpy as np
from hsets.components import ChartUnion
from hsets.parametrize import ParametrizeConfig
from hsets.parametrize import parametrize
from hsets.sets import HBasicSet
from monomialize.tree import TreeConfig
from series.core import Series
from series.numeric import evaluate_float
from series.numeric import jacobian_at
from series.schema import series_to_dict
from utils.tests import API
from utils.tests import MonoForgeTestCase

from .appendix import appendix_demo
from .appendix import appendix_manifold
from .cutting import butterfly_check
from .cutting import compatible_polydisk_check
from .cutting import critical_set_equations
from .cutting import fiber_critical_points
from .cutting import fiber_cut
from .cutting import fiber_maximizers
from .errors import FiberCutPreconditionError
from .errors import FiberGeomError
from .errors import FrameDegenerateError
from .errors import NotOnManifoldError
from .errors import RankDeficiencyError
from .errors import StratifyFirstError
from .frames import dimension_sampled
from .frames import fiber_basis
from .frames import immersion_witness
from .frames import rank_at
from .frames import tangent_basis
from .manifold import ManifoldSpec
from .manifold import build_phi
from .manifold import doubled
from .manifold import sample_points

X = Series.variable(2, 1)
Y = Series.variable(2, 2)
ONE = Fraction(1)
HALF = Fraction(1, 2)
UNIT_SQUARE = (ONE, ONE)
BALL = (Fraction(3, 2),) * 3
FIBER_POINTS = [-0.75, -0.5, -0.25, 0.0, 0.25, 0.5, 0.75]
TOLERANCE = 1e-10


def _sphere(split_n: int) -> ManifoldSpec:
    x, y, z = (Series.variable(3, i) for i in range(1, 4))
    return ManifoldSpec(BALL, split_n, (x**2 + y**2 + z**2 - 1,))


def _upper_half() -> ManifoldSpec:
    return ManifoldSpec(UNIT_SQUARE, 1, (), (Y,))


def _suite() -> dict[str, ManifoldSpec]:
    return {
        "line": ManifoldSpec(UNIT_SQUARE, 1, (Y - HALF * X,)),
        "parabola": ManifoldSpec(UNIT_SQUARE, 1, (Y - X**2,)),
        "sphere": _sphere(1),
        "above diagonal": appendix_manifold(),
        "upper half": _upper_half(),
    }


class TestFrames(MonoForgeTestCase):
    """Tests for tangent and fiber frames."""

    def test_tangent_basis(self) -> None:
        """Test the circle at (1, 0) and a coordinate hyperplane."""
        circle = ManifoldSpec((Fraction(2), Fraction(2)), 1, (X**2 + Y**2 - 1,))
        (tangent,) = tangent_basis(circle, [1, 0])
        assert np.allclose(np.abs(tangent), [0, 1])
        z = Series.variable(3, 3)
        plane = ManifoldSpec(BALL, 3, (z,))
        basis = tangent_basis(plane, [0.2, 0.3, 0])
        assert basis.shape == (2, 3)
        assert np.allclose(basis[:, 2], 0)
        assert np.allclose(basis @ basis.T, np.eye(2))

    def test_tangent_basis_errors(self) -> None:
        """Test dependent gradients and points off the manifold."""
        m = ManifoldSpec(UNIT_SQUARE, 1, (Y, 2 * Y))
        with self.assertRaises(RankDeficiencyError) as context:
            tangent_basis(m, [0.2, 0])
        assert context.exception.details["rank"] == 1
        with self.assertRaises(NotOnManifoldError):
            tangent_basis(m, [0.2, 0.5])
        with self.assertRaises(NotOnManifoldError):
            tangent_basis(appendix_manifold(), [0.5, 0.25])

    def test_fiber_basis(self) -> None:
        """Test an open set, a graph and a hyperplane with nothing left over."""
        frame = fiber_basis(appendix_manifold(), [0, 0.5])
        assert frame.rank == 1
        assert np.allclose(np.abs(frame.fiber), [[0, 1]])
        frame = fiber_basis(ManifoldSpec(UNIT_SQUARE, 1, (Y - X,)), [0.25, 0.25])
        assert frame.rank == 1
        assert frame.fiber.shape == (0, 2)
        frame = fiber_basis(ManifoldSpec(UNIT_SQUARE, 2, (Y,)), [0.5, 0])
        assert frame.rank == 1
        assert frame.fiber.shape == (0, 2)

    def test_frames_on_samples(self) -> None:
        """Test fiber vectors, gradients and projected vectors at every sample of five manifolds."""
        for name, m in _suite().items():
            samples = sample_points(m, 2 if m.nvars == 3 else 4)
            assert samples, name
            n = m.split_n
            for z in samples:
                frame = fiber_basis(m, z)
                assert frame.rank + len(frame.fiber) == m.d, name
                gradients = jacobian_at(m.eqs, z)
                for b in frame.fiber:
                    assert np.max(np.abs(b[:n])) <= TOLERANCE, name
                    for g in gradients:
                        assert abs(np.dot(g, b)) <= TOLERANCE * max(1.0, float(np.linalg.norm(g))), name
                projected = frame.projected[:, :n]
                assert np.max(np.abs(projected @ projected.T - np.eye(frame.rank))) <= TOLERANCE, name
                assert np.max(np.abs(frame.tangent @ frame.tangent.T - np.eye(m.d))) <= TOLERANCE, name

    def test_rank_at(self) -> None:
        """Test the sphere at a pole and on the equator, and a vertical hyperplane."""
        sphere = _sphere(2)
        assert rank_at(sphere, [0, 0, 1]) == 2
        assert rank_at(sphere, [1, 0, 0]) == 1
        assert rank_at(ManifoldSpec(UNIT_SQUARE, 1, (X,)), [0, 0.3]) == 0

    def test_rank_bounds(self) -> None:
        """Test that the sampled rank never exceeds d or n."""
        for name, m in _suite().items():
            for z in sample_points(m, 2 if m.nvars == 3 else 4):
                assert rank_at(m, z) <= min(m.d, m.split_n), name

    def test_immersion_witness(self) -> None:
        """Test graphs, vertical lines and the sphere with and without equator samples."""
        parabola = ManifoldSpec(UNIT_SQUARE, 1, (Y - X**2,))
        samples = sample_points(parabola, 4)
        witness = immersion_witness(parabola, samples)
        assert witness is not None
        assert witness.indices == (1,)
        for z in samples:
            tangent = tangent_basis(parabola, z)
            assert np.linalg.svd(tangent[:, [0]], compute_uv=False)[-1] >= witness.margin - TOLERANCE
        vertical = ManifoldSpec(UNIT_SQUARE, 1, (X,))
        witness = immersion_witness(vertical, [(0, -0.5), (0, 0.5)])
        assert witness is not None
        assert witness.indices == (2,)
        sphere = _sphere(2)
        poles = [(0, 0, 1), (0, 0, -1)]
        witness = immersion_witness(sphere, poles)
        assert witness is not None
        assert witness.indices == (1, 2)
        assert immersion_witness(sphere, [*poles, (1, 0, 0)]) is None
        assert immersion_witness(sphere, []) is None

    def test_dimension_sampled(self) -> None:
        """Test a sphere, a finite set, a graph and a chart union."""
        sphere = _sphere(2)
        assert dimension_sampled(sphere, sample_points(sphere, 2)) == 2
        assert dimension_sampled([X, Y], [(0, 0)]) == 0
        parabola = ManifoldSpec(UNIT_SQUARE, 1, (Y - X**2,))
        samples = sample_points(parabola, 4)
        assert dimension_sampled(parabola, samples) == 1
        # the projection is a local diffeomorphism, so the fibers add nothing
        assert all(rank_at(parabola, z) == 1 for z in samples)
        x1 = Series.variable(1, 1)
        result = parametrize(HBasicSet((ONE,), None, (x1,)), ParametrizeConfig(TreeConfig(), grid=16))
        assert dimension_sampled(ChartUnion(tuple(result.charts), (ONE,))) == 1


class TestCutting(MonoForgeTestCase):
    """Tests for φ, the critical set and fiber cutting."""

    def test_build_phi(self) -> None:
        """Test one inequality, none and two."""
        assert build_phi(appendix_manifold()) == (Y - X) * (1 - X**2) * (1 - Y**2)
        assert build_phi(ManifoldSpec((ONE, Fraction(2)), 1)) == (1 - X**2) * (4 - Y**2)
        assert build_phi(ManifoldSpec(UNIT_SQUARE, 1, (), (X, Y))) == X * Y * (1 - X**2) * (1 - Y**2)

    def test_critical_set_equations(self) -> None:
        """Test the region above the diagonal, the upper half and an open box."""
        assert critical_set_equations(appendix_manifold()) == [3 * Y**2 - 2 * X * Y - 1]
        assert critical_set_equations(_upper_half()) == [3 * Y**2 - 1]
        assert critical_set_equations(ManifoldSpec(UNIT_SQUARE, 2)) == []
        with self.assertRaises(FrameDegenerateError):
            critical_set_equations(ManifoldSpec(UNIT_SQUARE, 1, (Series.zero(2),)))

    def test_critical_points_match_maximizers(self) -> None:
        """Test roots of the critical equations against grid maximization of φ along each fiber."""
        for m in [appendix_manifold(), _upper_half()]:
            phi = build_phi(m)
            for x in FIBER_POINTS:
                roots = fiber_critical_points(m, [x])
                maxima = fiber_maximizers(m, [x], 512)
                assert len(roots) == len(maxima) == 1
                assert abs(roots[0] - maxima[0]) <= 1e-6
                for eq in critical_set_equations(m):
                    assert abs(evaluate_float(eq, [x, maxima[0]])) <= 1e-6
                y, h = roots[0], 1e-4
                top = evaluate_float(phi, [x, y])
                assert evaluate_float(phi, [x, y - h]) < top
                assert evaluate_float(phi, [x, y + h]) < top

    def test_upper_half_critical_fiber(self) -> None:
        """Test that every fiber of the upper half has its critical point at 1/√3."""
        for x in FIBER_POINTS:
            (y,) = fiber_critical_points(_upper_half(), [x])
            assert abs(y - 1 / np.sqrt(3)) <= 1e-12

    def test_fiber_critical_points_precondition(self) -> None:
        """Test that manifolds with equations are refused."""
        with self.assertRaises(FiberCutPreconditionError):
            fiber_critical_points(ManifoldSpec(UNIT_SQUARE, 1, (Y - X,)), [0])

    def test_compatible_polydisk_check(self) -> None:
        """Test a fiber leaving the smaller polydisk, a butterfly and the full polydisk."""
        m = appendix_manifold()
        assert not compatible_polydisk_check(m, (Fraction(3, 4), HALF), 64)
        assert compatible_polydisk_check(m, UNIT_SQUARE, 64)
        butterfly = ManifoldSpec(UNIT_SQUARE, 1, (), (X**2 - Y**2,))
        assert compatible_polydisk_check(butterfly, (HALF, HALF), 64)
        with self.assertRaises(FiberGeomError):
            compatible_polydisk_check(m, (Fraction(2), HALF))

    def test_butterfly_check(self) -> None:
        """Test a butterfly, the region above the diagonal and a manifold without fibers."""
        report = butterfly_check(ManifoldSpec(UNIT_SQUARE, 1, (), (X**2 - Y**2,)), 8)
        assert report.ok
        assert report.witnesses == (1,)
        report = butterfly_check(appendix_manifold(), 8)
        assert not report.ok
        assert report.counter_example is not None
        x, y = report.counter_example
        assert abs(y) >= abs(x)
        assert butterfly_check(ManifoldSpec(UNIT_SQUARE, 2, (), (Y - X,)), 8).ok

    def test_doubled(self) -> None:
        """Test that the doubled manifold bounds the fiber coordinate by its own radius."""
        m = doubled(appendix_manifold())
        assert (m.nvars, m.split_n, m.d) == (4, 3, 4)
        assert m.names == ("x′", "y′", "x", "y")
        assert m.contains([0.5, 0.75, 0, 0.5])
        assert not m.contains([0.5, 0.25, 0, 0.5])
        assert butterfly_check(m, 4).witnesses == (2,)

    def test_fiber_cut(self) -> None:
        """Test the region above the diagonal: one equation, lower dimension, every sampled fiber hit."""
        report = fiber_cut(appendix_manifold(), grid=8, halvings=2, sweep_grid=32)
        assert report.equations == [3 * Y**2 - 2 * X * Y - 1]
        assert (report.rank, report.dimension, report.critical_dimension) == (1, 2, 1)
        assert report.dimension_drops
        assert report.radius == UNIT_SQUARE
        assert report.projection_samples > 0
        assert report.projection_failures == []
        for point in report.critical_points:
            assert abs(evaluate_float(report.equations[0], point)) <= 1e-9

    def test_fiber_cut_upper_half(self) -> None:
        """Test that every sampled fiber of the upper half is cut at 1/√3."""
        report = fiber_cut(_upper_half(), grid=8, halvings=1, sweep_grid=32)
        assert report.equations == [3 * Y**2 - 1]
        assert report.projection_failures == []
        assert len(report.critical_points) == report.projection_samples
        assert all(abs(y - 1 / np.sqrt(3)) <= 1e-12 for _, y in report.critical_points)

    def test_fiber_cut_errors(self) -> None:
        """Test a rank change across components, a manifold without fibers and an empty one."""
        crossing = ManifoldSpec(UNIT_SQUARE, 1, ((X - Fraction(1, 3)) * (Y + HALF),))
        with self.assertRaises(StratifyFirstError) as context:
            fiber_cut(crossing, grid=4, sweep_grid=16)
        assert context.exception.details["ranks"] == [0, 1]
        with self.assertRaises(FiberCutPreconditionError):
            fiber_cut(ManifoldSpec(UNIT_SQUARE, 2, (), (Y - X,)), grid=4, sweep_grid=16)
        with self.assertRaises(FiberCutPreconditionError):
            fiber_cut(ManifoldSpec(UNIT_SQUARE, 1, (), (Series.constant(2, -1),)), grid=4)


class TestAppendix(MonoForgeTestCase):
    """Tests for the exact computation of the empty critical germ."""

    def test_appendix_demo(self) -> None:
        """Test the derived equation, the roots and every certificate check."""
        report = appendix_demo()
        assert report.phi == "(y − x)(1 − x²)(1 − y²)"
        assert report.equation == "3y² − 2xy − 1"
        assert report.root_formula == "y = x/3 ± √(x²+3)/3"
        assert (report.epsilon, report.bound) == ("√2/4", "√2/3")
        assert all(report.checks.values()), report.checks
        assert report.empty
        assert report.verdict == "A ∩ Δ_{(√2/4, √2/3)} = ∅: true"

    def test_roots_avoid_the_box(self) -> None:
        """Test numerically that both root branches stay above √2/3 in absolute value for |x| < √2/4."""
        epsilon, bound = np.sqrt(2) / 4, np.sqrt(2) / 3
        for x in np.linspace(-epsilon, epsilon, 101)[1:-1]:
            for sign in (1, -1):
                assert abs(x / 3 + sign * np.sqrt(x**2 + 3) / 3) > bound


class TestFiberGeomApi(MonoForgeTestCase):
    """Tests for the fibergeom API."""

    def test_fibercut(self) -> None:
        """Test the fibercut endpoint on the region above the diagonal."""
        payload = {
            "polyradius": ["1", "1"],
            "split_n": 1,
            "ineqs": [series_to_dict(Y - X, ["x", "y"])],
            "grid": 8,
            "halvings": 1,
            "sweep_grid": 32,
        }
        result = self.post_json("/fibergeom/fibercut/", payload)["monoforge_response"]
        assert result["pretty"] == ["3y² − 2xy − 1"]
        assert result["dimension_drops"]
        assert result["projection"]["failures"] == []

    def test_fibercut_errors(self) -> None:
        """Test a wrong dimension hint and a rank change."""
        payload = {"polyradius": ["1", "1"], "split_n": 1, "d": 1, "ineqs": [series_to_dict(Y - X, ["x", "y"])]}
        self.post_json("/fibergeom/fibercut/", payload, status=422)
        crossing = (X - Fraction(1, 3)) * (Y + HALF)
        payload = {"polyradius": ["1", "1"], "split_n": 1, "eqs": [series_to_dict(crossing, ["x", "y"])], "grid": 4}
        result = self.post_json("/fibergeom/fibercut/", payload, status=400)
        assert result["error"] == "fibergeom.StratifyFirstError"

    def test_appendix(self) -> None:
        """Test the appendix endpoint."""
        response = self.client.get(f"{API}/fibergeom/appendix/")
        assert response.status_code == 200
        assert response.json()["monoforge_response"]["verdict"] == "A ∩ Δ_{(√2/4, √2/3)} = ∅: true"
