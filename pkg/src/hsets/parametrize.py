"""Charts (Q, ρ) parametrizing an H-basic set near the origin, with a sampled coverage report."""
from __future__ import annotations

import logging
from collections import Counter
from collections.abc import Sequence
from dataclasses import dataclass
from dataclasses import field
from fractions import Fraction
from typing import Any

import numpy as np
from django.conf import settings
from monomialize.algorithm import monomialize
from monomialize.charts import locate
from monomialize.charts import preimages
from monomialize.errors import UncoveredPointError
from monomialize.tree import Leaf
from monomialize.tree import TreeConfig
from monomialize.tree import TreeNode
from monomialize.tree import iter_leaves
from series.core import Series
from series.core import componentwise_min
from series.normality import NormalCertificate
from transforms.elementary import format_lambda
from transforms.substitution import compose_path
from utils.parallel import parallel_map

from .lifting import coefficient_sum_bound
from .sets import Chart
from .sets import HBasicSet
from .sets import QuadrantFactor
from .sets import SubQuadrant
from .signs import certified_membership
from .signs import sign_on_quadrant

logger = logging.getLogger("monoforge")


@dataclass(frozen=True)
class ParametrizeConfig:
    """Tree settings plus the coverage region and grid."""

    tree: TreeConfig
    delta: Fraction = Fraction(1, 8)
    grid: int = 256
    halvings: int = 32
    threads: int | None = None

    @classmethod
    def from_settings(cls, tree: TreeConfig | None = None, **overrides: Any) -> ParametrizeConfig:  # noqa: ANN401
        """Defaults from the MONO_FORGE_* settings, explicit overrides winning."""
        values: dict[str, Any] = {"tree": tree or TreeConfig.from_settings(), "grid": settings.MONO_FORGE_GRID}
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


@dataclass
class CoverageReport:
    """How many grid samples of A ∩ Δ_δ some chart image reaches."""

    samples: int = 0
    covered: int = 0
    hits: list[int] = field(default_factory=list)
    missing: list[dict[str, Any]] = field(default_factory=list)

    @property
    def fraction(self) -> float:
        """Covered share of the samples, 1 for an empty sample."""
        return self.covered / self.samples if self.samples else 1.0


@dataclass
class ParametrizeResult:
    """The charts, and the tree they were read off."""

    charts: list[Chart]
    coverage: CoverageReport
    root: TreeNode


def unit_bound(unit: Series, radii: Sequence[Fraction | None]) -> Fraction:
    """Σ |c_β|·ρ^β over the non constant terms; a None radius stands for a {0} factor."""
    total = Fraction(0)
    for exp, coef in unit.items():
        if not any(exp):
            continue
        if any(e and r is None for e, r in zip(exp, radii, strict=True)):
            continue
        term = abs(coef)
        for e, r in zip(exp, radii, strict=True):
            if e:
                term *= r**e  # type: ignore[operator]
        total += term
    return total


def _inside_polydisk(
    quadrant: SubQuadrant,
    coordinates: Sequence[tuple[Series, Fraction]],
    halvings: int,
) -> SubQuadrant | None:
    """Shrink radii until every coordinate g of the chart map has Σ|c_β|ρ^β ≤ r.

    Only the factors of variables dividing a failing g are halved, or all of
    them when none does.
    """
    radii = [f.radius for f in quadrant.factors]
    for _ in range(halvings + 1):
        box = [r or Fraction(0) for r in radii]
        failing = next((g for g, r in coordinates if coefficient_sum_bound(g, box) > r), None)
        if failing is None:
            return SubQuadrant(tuple(QuadrantFactor(f.kind, r) for f, r in zip(quadrant.factors, radii, strict=True)))
        live = [k for k, r in enumerate(radii) if r is not None]
        dividing = [k for k in live if componentwise_min(failing.support)[k]]
        for k in dividing or live:
            radii[k] /= 2  # type: ignore[operator]
    return None


def certify_radius(
    certs: Sequence[NormalCertificate],
    quadrant: SubQuadrant,
    halvings: int,
    coordinates: Sequence[tuple[Series, Fraction]] = (),
) -> SubQuadrant | None:
    """Halve a shared radius, starting at 1, until every unit keeps the sign of its constant.

    The unit U keeps its sign on the quadrant when Σ|c_β|ρ^β < |U(0)|. That
    bound is exact for polynomial units; truncated units are accepted on their
    stored terms with a warning. Each pair (g, r) in coordinates is a
    coordinate of the chart map, which must then stay below r in absolute
    value; shrinking radii never breaks the unit bounds.
    """
    radius = Fraction(1)
    for _ in range(halvings + 1):
        sized = quadrant.with_radius(radius)
        radii = [f.radius for f in sized.factors]
        if all(unit_bound(c.unit, radii) < abs(c.unit_constant) for c in certs):
            if any(not c.unit.exact for c in certs) or any(not g.exact for g, _ in coordinates):
                logger.warning(f"radius {radius} for {quadrant.describe()} accepted on truncated series")
            return _inside_polydisk(sized, coordinates, halvings)
        radius /= 2
    return None


def chart_covers(chart: Chart, p: Sequence[Any]) -> bool:
    """True when some preimage of p under the chart path lies in the chart quadrant."""
    candidates = [list(p)]
    for nu in chart.path:
        following = []
        for q in candidates:
            try:
                following.extend(preimages(nu, q))
            except UncoveredPointError:
                continue
        candidates = following
    return any(chart.quadrant.contains(q) for q in candidates)


def _leaf_charts(leaf: TreeNode, a: HBasicSet, has_eq: bool, config: ParametrizeConfig) -> list[Chart]:  # noqa: FBT001
    if not isinstance(leaf.children, Leaf):
        return []
    certs = leaf.children.certificates[: leaf.target_count]
    eq_cert = certs[0] if has_eq else None
    ineq_certs = list(certs[1:] if has_eq else certs)
    coordinates = [
        (compose_path(leaf.path, Series.variable(leaf.nvars, k)), r) for k, r in enumerate(a.polyradius, start=1)
    ]
    charts = []
    for quadrant in certified_membership(leaf.nvars, eq_cert, ineq_certs):
        relevant = [c for c in ineq_certs if sign_on_quadrant(c, quadrant)]
        sized = certify_radius(relevant, quadrant, config.halvings, coordinates)
        if sized is None:
            logger.warning(f"no radius certified for {quadrant.describe()} at {leaf.path.describe()}")
            continue
        signs = tuple(sign_on_quadrant(c, quadrant) for c in certs)
        charts.append(Chart(sized, leaf.path, signs))
    return charts


def coverage_report(
    region: HBasicSet,
    root: TreeNode,
    charts: Sequence[Chart],
    config: ParametrizeConfig,
) -> CoverageReport:
    """Sample A ∩ Δ_δ on the grid and count the samples some chart image reaches.

    Every uncovered sample is located in the tree, and the report lists the
    unexpanded λ charts those samples would need.
    """
    shrunk = region.shrink(config.delta)
    mask = shrunk.membership_mask(config.grid)
    axes = shrunk.grid_axes(config.grid)
    points = [tuple(float(axes[k][i]) for k, i in enumerate(index)) for index in np.argwhere(mask)]

    def classify(p: tuple[float, ...]) -> int | None:
        return next((index for index, chart in enumerate(charts) if chart_covers(chart, p)), None)

    found = parallel_map(classify, points, threads=config.threads)
    report = CoverageReport(samples=len(points), hits=[0] * len(charts))
    missing: Counter[tuple[str, int, int, str]] = Counter()
    for p, index in zip(points, found, strict=True):
        if index is not None:
            report.covered += 1
            report.hits[index] += 1
            continue
        try:
            location = locate(root, p)
        except UncoveredPointError:
            missing[("exceptional locus", 0, 0, "")] += 1
            continue
        if location.missing is not None:
            family, lam = location.missing
            missing[(family.node.path.describe(), family.i, family.j, format_lambda(lam))] += 1
        else:
            missing[(location.node.path.describe(), 0, 0, "outside certified radius")] += 1
    report.missing = [
        {"node": node, "i": i, "j": j, "lambda": lam, "samples": count}
        for (node, i, j, lam), count in missing.most_common()
    ]
    if report.fraction < 1:
        logger.warning(f"charts cover {report.covered} of {report.samples} samples")
    return report


def parametrize(a: HBasicSet, config: ParametrizeConfig | None = None) -> ParametrizeResult:
    """Charts (Q, ρ) with ρ(Q) inside the sign conditions of A, read off a monomializing tree.

    The defining series are monomialized together. At every expanded leaf
    the sub-quadrants on which the pulled back equation vanishes and every
    pulled back inequality is positive become charts, each with a radius
    certified by certify_radius.

    Args:
        a: The set
        config: Tree settings, coverage region and grid
    Returns:
        The charts, the coverage report and the tree
    """
    config = config or ParametrizeConfig.from_settings()
    has_eq = a.eq is not None and not a.eq.is_zero()
    if any(g.is_zero() for g in a.ineqs):
        logger.info("an inequality is 0 > 0, the set is empty")
        root = monomialize([Series.constant(a.nvars, 1)], config.tree)
        return ParametrizeResult([], coverage_report(a, root, [], config), root)
    targets = ([a.eq] if has_eq and a.eq is not None else []) + list(a.ineqs)
    if not targets:
        targets = [Series.constant(a.nvars, 1)]
    root = monomialize(targets, config.tree)
    charts: list[Chart] = []
    for leaf in iter_leaves(root):
        charts.extend(_leaf_charts(leaf, a, has_eq, config))
    coverage = coverage_report(a, root, charts, config)
    logger.info(f"parametrized with {len(charts)} chart(s), coverage {coverage.fraction:.4f}")
    return ParametrizeResult(charts, coverage, root)
