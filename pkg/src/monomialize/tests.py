"""Tests for the monomialize app."""
import logging
from fractions import Fraction

from factory.random import randgen
from series.core import Series
from series.factories import PolynomialFactory
from series.normality import Normal
from series.normality import is_normal
from transforms.elementary import INF
from transforms.elementary import BlowUp
from transforms.elementary import Ramification
from transforms.elementary import Shear
from transforms.elementary import TransformPath
from transforms.elementary import Tschirnhausen
from transforms.substitution import compose_path
from utils.tests import MonoForgeTestCase

from .algorithm import monomialize
from .algorithm import shear_coefficients
from .charts import chart_at_point
from .checks import branch_faithfulness
from .checks import leaf_soundness
from .checks import star_check
from .errors import DepthExceededError
from .errors import InconclusiveError
from .errors import MonomializeError
from .errors import NonIntegerExponentError
from .errors import NotAFamilyError
from .errors import PrecisionExhaustedError
from .errors import UncoveredPointError
from .export import tree_graph
from .export import tree_summary
from .export import tree_to_dot
from .toric import linearize_exponents
from .tree import Expanded
from .tree import LambdaFamily
from .tree import Leaf
from .tree import TreeConfig
from .tree import TreeNode
from .tree import expand_lambda
from .tree import iter_leaves

X = Series.variable(2, 1)
Y = Series.variable(2, 2)
X1 = Series.variable(1, 1)
X3, Y3, Z3 = (Series.variable(3, k) for k in (1, 2, 3))

SEEDS = (Fraction(0), Fraction(1), Fraction(-1), Fraction(2), Fraction(-2), INF)
CORPUS = {
    "y - x": [Y - X],
    "y^2 - x^2": [Y**2 - X**2],
    "y^2 - x^3": [Y**2 - X**3],
    "xy": [X * Y],
    "x^2 + y^2": [X**2 + Y**2],
    "(y - x)(y^2 - x^3)": [(Y - X) * (Y**2 - X**3)],
}
TRUNCATED_ROOTS = {
    "2y - 2y^2 + x^2": [2 * Y - 2 * Y**2 + X**2],
    "3y^2 - xy + 2x^3y^2": [3 * Y**2 - X * Y + 2 * X**3 * Y**2],
    "x^3 - 2x^2y + 3x^2y^2": [X**3 - 2 * X**2 * Y + 3 * X**2 * Y**2],
    "-x - y^2z": [-X3 - Y3**2 * Z3],
}


class TestMonomialize(MonoForgeTestCase):
    """Tests for building admissible trees."""

    def test_translation_only(self) -> None:
        """Test that Y − X needs a single Tschirnhausen edge."""
        root = monomialize([Y - X], TreeConfig())
        assert isinstance(root.children, Expanded)
        (child,) = root.children.children
        assert child.edge_in == Tschirnhausen(X1)
        assert isinstance(child.children, Leaf)
        assert child.series_state == (Y,)
        assert child.children.certificates[0].alpha == (0, 1)

    def test_cone_family(self) -> None:
        """Test that Y² − X² opens one blow-up family with the seeded charts."""
        root = monomialize([Y**2 - X**2], TreeConfig(lambda_seed=(Fraction(1), Fraction(-1))))
        family = root.children
        assert isinstance(family, LambdaFamily)
        assert (family.i, family.j) == (2, 1)
        assert [lam for lam, _ in family.sorted_items()] == [Fraction(-1), Fraction(0), Fraction(1), INF]
        assert family.expanded[Fraction(0)].series_state[0] == X**2 * Y**2 - X**2
        assert family.expanded[INF].series_state[0] == Y**2 - X**2 * Y**2
        assert family.expanded[INF].children.certificates[0].alpha == (0, 2)  # type: ignore[union-attr]
        assert family.expanded[Fraction(1)].series_state[0] == X**2 * Y**2 + 2 * X**2 * Y
        assert all(node.is_leaf() for _, node in family.sorted_items())

    def test_expand_lambda(self) -> None:
        """Test lazy expansion at a new λ and memoization of known ones."""
        root = monomialize([Y**2 - X**2], TreeConfig())
        child = expand_lambda(root, Fraction(2))
        assert child.series_state[0] == X**2 * Y**2 + 4 * X**2 * Y + 3 * X**2
        assert isinstance(child.children, Leaf)
        assert child.children.certificates[0].unit_constant == 3
        assert expand_lambda(root, Fraction(2)) is child
        assert expand_lambda(root, INF) is root.children.expanded[INF]  # type: ignore[union-attr]
        with self.assertRaises(NotAFamilyError):
            expand_lambda(child, Fraction(0))

    def test_cusp_ramifies(self) -> None:
        """Test that Y² − X³ is ramified by 2! on X in both signs before blowing up."""
        root = monomialize([Y**2 - X**3], TreeConfig(check_measure=True))
        assert isinstance(root.children, Expanded)
        edges = [child.edge_in for child in root.children.children]
        assert edges == [Ramification(1, 2, 1), Ramification(1, 2, -1)]
        assert root.children.children[0].series_state[0] == Y**2 - X**6
        assert root.children.children[1].series_state[0] == Y**2 + X**6
        assert all(isinstance(child.children, LambdaFamily) for child in root.children.children)

    def test_normal_target_is_a_leaf(self) -> None:
        """Test that a normal target needs no transform at all."""
        root = monomialize([X * Y], TreeConfig())
        assert root.is_leaf()
        assert root.path == TransformPath()

    def test_corpus(self) -> None:
        """Test that every expanded leaf is normal, faithful and *-monomialized."""
        config = TreeConfig(max_depth=64, trunc=16, lambda_seed=SEEDS)
        for name, targets in CORPUS.items():
            root = monomialize(targets, config)
            leaves = list(iter_leaves(root))
            assert leaves, name
            for node in root.iter_nodes():
                assert node.children is not None, (name, node)
            for leaf in leaves:
                assert all(isinstance(is_normal(f), Normal) for f in leaf.series_state), (name, leaf)
            report = star_check(root)
            assert report.ok, (name, report.violations)
            assert branch_faithfulness(root, targets) == [], name
            assert leaf_soundness(root) == [], name

    def assert_sound(self, name: str, root: TreeNode, targets: list[Series]) -> None:
        """Check every expanded leaf of a built tree against the targets."""
        assert list(iter_leaves(root)), name
        report = star_check(root)
        assert report.ok, (name, report.violations)
        assert branch_faithfulness(root, targets) == [], name
        assert leaf_soundness(root) == [], name

    def test_truncated_roots(self) -> None:
        """Test targets whose Tschirnhausen roots are infinite series, certified through known monomials."""
        for name, targets in TRUNCATED_ROOTS.items():
            root = monomialize(targets, TreeConfig())
            self.assert_sound(name, root, targets)
            assert any(isinstance(node.edge_in, Tschirnhausen) for node in root.iter_nodes()), name
            assert any(f.trunc is not None for leaf in iter_leaves(root) for f in leaf.series_state), name

    def test_random_targets(self) -> None:
        """Test that random polynomials either monomialize soundly or fail only on precision."""
        samples = [
            ("y^2z + 2x^2y", [Y3**2 * Z3 + 2 * X3**2 * Y3]),
            ("y^2 - xyz^2", [Y3**2 - X3 * Y3 * Z3**2]),
            ("2xy^2z^2 - x^2z^2 - x^2", [2 * X3 * Y3**2 * Z3**2 - X3**2 * Z3**2 - X3**2]),
            ("2x^2 + 2x^2yz - xy^2z^2", [2 * X3**2 + 2 * X3**2 * Y3 * Z3 - X3 * Y3**2 * Z3**2]),
        ]
        for nvars in (2, 3):
            for _ in range(12):
                f = PolynomialFactory.build(nvars=nvars, degree=randgen.choice([2, 3]), count=3)
                samples.append((f.pretty(), [f]))
        config = TreeConfig(trunc=8, max_trunc=8, lambda_seed=())
        for name, targets in samples:
            try:
                root = monomialize(targets, config)
            except InconclusiveError as e:
                assert "trunc" in e.details, name
                assert "try a larger trunc" not in e.message, name
                continue
            self.assert_sound(name, root, targets)

    def test_precision_escalation(self) -> None:
        """Test that coefficients vanishing up to the truncation rebuild at a larger one before giving up."""
        target = Series(2, {(0, 2): 1}, trunc=16)
        logging.disable(logging.NOTSET)
        self.addCleanup(logging.disable, logging.CRITICAL)
        with self.assertLogs("monoforge", level="WARNING") as logs:
            with self.assertRaises(PrecisionExhaustedError) as ctx:
                monomialize([target], TreeConfig(trunc=16, max_trunc=32))
        assert any("rebuilding at trunc 32" in line for line in logs.output)
        assert ctx.exception.details["trunc"] == 16
        with self.assertRaises(PrecisionExhaustedError):
            monomialize([target], TreeConfig(trunc=16, max_trunc=16))

    def test_summary_and_dot(self) -> None:
        """Test the JSON summary and the graphviz rendering."""
        root = monomialize([Y - X], TreeConfig())
        summary = tree_summary(root, ["x", "y"])
        assert summary["leaves"] == 1
        assert summary["star_check"] == {"checked": 0, "violations": []}
        assert summary["tree"]["root"]["children"]["kind"] == "expanded"
        dot = tree_to_dot(root, ["x", "y"])
        assert dot.startswith("digraph monomialization {")
        assert "shape=box" in dot
        assert "τ[2](x)" in dot
        graph = tree_graph(root, ["x", "y"])
        assert graph.name == "monomialization"
        assert list(graph.edges) == [("n0", "n1")]
        assert graph.nodes["n1"]["shape"] == "box"
        assert graph.edges["n0", "n1"]["label"] == '"τ[2](x)"'
        assert "shape" not in graph.nodes["n0"]

    def test_depth_exceeded(self) -> None:
        """Test that the depth bound stops the recursion with a trace."""
        with self.assertRaises(DepthExceededError) as ctx:
            monomialize([Y**2 - X**3], TreeConfig(max_depth=1))
        assert "trace" in ctx.exception.details

    def test_inconclusive_truncation(self) -> None:
        """Test that a monomial of a truncated target is not certified without knowing it divides the rest."""
        with self.assertRaises(InconclusiveError) as ctx:
            monomialize([Series(2, {(1, 0): 1}, trunc=16)], TreeConfig())
        assert "not known to divide" in ctx.exception.message
        assert ctx.exception.details["alpha"] == [1, 0]

    def test_bad_targets(self) -> None:
        """Test empty, zero and too coarsely truncated targets."""
        with self.assertRaises(MonomializeError):
            monomialize([], TreeConfig())
        with self.assertRaises(MonomializeError):
            monomialize([Series.zero(2)], TreeConfig())
        with self.assertRaises(MonomializeError):
            monomialize([Series(2, {(1, 0): 1}, trunc=4)], TreeConfig())

    def test_shear_coefficients(self) -> None:
        """Test the smallest integer point where Q does not vanish."""
        assert shear_coefficients(X1) == (Fraction(-1),)
        assert shear_coefficients(X1**2 - 1) == (Fraction(0),)
        assert shear_coefficients(X1**2 - X1) == (Fraction(-1),)


class TestStarCheck(MonoForgeTestCase):
    """Tests for the independent *-monomialization check."""

    def test_violation(self) -> None:
        """Test a hand-built branch where a shear breaks the critical variable of a blow-up."""
        root = TreeNode((Y,))
        blown = root.add_child(BlowUp(2, 1, Fraction(0)))
        sheared = blown.add_child(Shear(2, (Fraction(1),)))
        sheared.children = Leaf(())
        report = star_check(root)
        assert report.checked == 1
        (violation,) = report.violations
        assert violation.edge == 0
        assert violation.variable == 1
        assert violation.verdict == "not_normal"

    def test_height_zero(self) -> None:
        """Test that a tree without edges has nothing to check."""
        root = TreeNode((X,))
        root.children = Leaf(())
        report = star_check(root)
        assert report.ok
        assert report.checked == 0


class TestLinearizeExponents(MonoForgeTestCase):
    """Tests for toric linearization of exponent tuples."""

    def test_already_ordered(self) -> None:
        """Test comparable tuples and a single tuple."""
        path, ordered = linearize_exponents([(1, 0), (2, 0)])
        assert len(path) == 0
        assert ordered == [(1, 0), (2, 0)]
        path, ordered = linearize_exponents([(3, 1)])
        assert len(path) == 0

    def test_one_blow_up(self) -> None:
        """Test that X and Y become comparable after one chart, replayed on the monomials."""
        path, ordered = linearize_exponents([(1, 0), (0, 1)])
        assert path == TransformPath((BlowUp(2, 1, Fraction(0)),))
        assert ordered == [(1, 0), (1, 1)]
        assert compose_path(path, X) == X
        assert compose_path(path, Y) == X * Y

    def test_euclid(self) -> None:
        """Test that coprime differences run through Euclid and end comparable."""
        path, ordered = linearize_exponents([(5, 0), (0, 3)])
        assert len(path) > 1
        low, high = ordered
        assert all(a <= b for a, b in zip(low, high, strict=True))

    def test_non_integer(self) -> None:
        """Test that rational entries are refused."""
        with self.assertRaises(NonIntegerExponentError):
            linearize_exponents([(Fraction(1, 2), 0), (0, 1)])


class TestChartAtPoint(MonoForgeTestCase):
    """Tests for finding the chart that covers a point."""

    def test_cone_point(self) -> None:
        """Test that (1/4, 1/8) goes through the chart at λ = 1/2."""
        result = chart_at_point([Y**2 - X**2], [Fraction(1, 4), Fraction(1, 8)], TreeConfig())
        assert result.path == TransformPath((BlowUp(2, 1, Fraction(1, 2)),))
        assert result.preimage == (Fraction(1, 4), Fraction(0))
        assert result.quadrant.describe() == "(+, 0)"
        assert all(c.unit_constant != 0 for c in result.certificates)

    def test_origin_is_uncovered(self) -> None:
        """Test that the centre of the blow-up is not in any chart."""
        with self.assertRaises(UncoveredPointError):
            chart_at_point([Y**2 - X**2], [Fraction(0), Fraction(0)], TreeConfig())

    def test_normal_target(self) -> None:
        """Test the identity chart of a normal target."""
        result = chart_at_point([X1], [Fraction(1, 3)], TreeConfig())
        assert result.path == TransformPath()
        assert result.quadrant.describe() == "(+)"


class TestMonomializeApi(MonoForgeTestCase):
    """Tests for the monomialize API."""

    def test_run(self) -> None:
        """Test the run endpoint on Y − X."""
        payload = {
            "targets": [
                {
                    "vars": ["x", "y"],
                    "trunc": "exact",
                    "terms": [{"exp": [0, 1], "coef": "1"}, {"exp": [1, 0], "coef": "-1"}],
                },
            ],
            "config": {"lambda_seed": ["1", "-1"]},
        }
        result = self.post_json("/monomialize/run/", payload)["monoforge_response"]
        assert result["leaves"] == 1
        assert result["faithfulness_failures"] == []
        assert result["tree"]["vars"] == ["x", "y"]

    def test_bad_seed(self) -> None:
        """Test that a malformed λ seed is a validation error."""
        target = {"vars": ["x"], "trunc": "exact", "terms": [{"exp": [1], "coef": "1"}]}
        payload = {"targets": [target], "config": {"lambda_seed": ["x"]}}
        self.post_json("/monomialize/run/", payload, status=422)
