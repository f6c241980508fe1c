"""Walking a tree with a point: preimages, locate and chart_at_point."""
from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

import sympy
from hsets.sets import SubQuadrant
from series.core import Series
from series.core import evaluate
from series.normality import NormalCertificate
from transforms.elementary import INF
from transforms.elementary import BlowUp
from transforms.elementary import ElementaryTransform
from transforms.elementary import Lambda
from transforms.elementary import Ramification
from transforms.elementary import Shear
from transforms.elementary import TransformPath
from transforms.elementary import Tschirnhausen

from .algorithm import monomialize
from .errors import MonomializeError
from .errors import UncoveredPointError
from .tree import Expanded
from .tree import LambdaFamily
from .tree import Leaf
from .tree import TreeConfig
from .tree import TreeNode

logger = logging.getLogger("monoforge")

LAMBDA_DENOMINATOR = 10**6


def is_symbolic(value: Any) -> bool:  # noqa: ANN401
    """True for sympy numbers."""
    return isinstance(value, sympy.Basic)


def real_root(value: Any, d: int) -> Any:  # noqa: ANN401
    """The real d-th root of a value, nonnegative for even d.

    Rationals stay exact: perfect powers give a Fraction, the rest a sympy number.
    """
    if isinstance(value, int | Fraction):
        value = Fraction(value)
        sign = -1 if value < 0 else 1
        num = _integer_root(abs(value.numerator), d)
        den = _integer_root(value.denominator, d)
        if num is not None and den is not None:
            return sign * Fraction(num, den)
        return sympy.real_root(sympy.Rational(value.numerator, value.denominator), d)
    if is_symbolic(value):
        return sympy.real_root(value, d)
    magnitude = abs(float(value)) ** (1.0 / d)
    return -magnitude if value < 0 else magnitude


def _integer_root(value: int, d: int) -> int | None:
    root, exact = sympy.integer_nthroot(value, d)
    return int(root) if exact else None


def preimages(nu: ElementaryTransform, p: Sequence[Any]) -> list[list[Any]]:
    """All points q with ν(q) = p, when there are finitely many.

    Raises:
        UncoveredPointError: When p lies on the exceptional locus of a blow-up chart
    """
    q = list(p)
    nu.validate(len(q))
    if isinstance(nu, BlowUp):
        pj = q[nu.j - 1]
        if pj == 0:
            raise UncoveredPointError(
                f"{nu.describe()} does not reach points with x_{nu.j} = 0",
                point=[str(v) for v in p],
            )
        q[nu.i - 1] = q[nu.i - 1] / pj - nu.lam
        return [q]
    if isinstance(nu, Tschirnhausen):
        q[nu.i - 1] = q[nu.i - 1] - evaluate(nu.h, q[: nu.i - 1])
        return [q]
    if isinstance(nu, Shear):
        pi = q[nu.i - 1]
        for k, ck in enumerate(nu.c):
            q[k] = q[k] - ck * pi
        return [q]
    if isinstance(nu, Ramification):
        target = nu.sign * q[nu.i - 1]
        if nu.d % 2 == 1:
            q[nu.i - 1] = real_root(target, nu.d)
            return [q]
        if target < 0:
            return []
        root = real_root(target, nu.d)
        if root == 0:
            return [q[: nu.i - 1] + [root] + q[nu.i :]]
        return [q[: nu.i - 1] + [root] + q[nu.i :], q[: nu.i - 1] + [-root] + q[nu.i :]]
    raise MonomializeError(f"unknown transform {nu!r}")


def family_lambda(family: LambdaFamily, q: Sequence[Any]) -> Lambda:
    """The λ whose chart of the family reaches q: q_i/q_j, or ∞ when q_j = 0.

    Irrational and float ratios are replaced by a close rational, which
    leaves a small nonzero preimage coordinate.

    Raises:
        UncoveredPointError: When q_i = q_j = 0
    """
    qi, qj = q[family.i - 1], q[family.j - 1]
    if qj == 0:
        if qi == 0:
            raise UncoveredPointError(
                f"point lies on the centre of the blow-up π[{family.i},{family.j}]",
                point=[str(v) for v in q],
            )
        return INF
    ratio = qi / qj
    if isinstance(ratio, int | Fraction):
        return Fraction(ratio)
    if is_symbolic(ratio) and ratio.is_rational:
        return Fraction(int(ratio.p), int(ratio.q))
    return Fraction(float(ratio)).limit_denominator(LAMBDA_DENOMINATOR)


@dataclass
class Location:
    """Where a point ends up in a tree: a leaf, or the family chart still to expand."""

    node: TreeNode
    point: list[Any]
    missing: tuple[LambdaFamily, Lambda] | None = None

    @property
    def found(self) -> bool:
        """True when a leaf was reached."""
        return self.missing is None and isinstance(self.node.children, Leaf)


def locate(root: TreeNode, p: Sequence[Any]) -> Location:
    """Walk the expanded tree with a point without expanding anything.

    At a family the chart is chosen by family_lambda. At a ramification the
    branch with a real root is taken, the positive root first.

    Raises:
        UncoveredPointError: When the point sits on an exceptional locus
    """
    if len(p) != root.nvars:
        raise MonomializeError(f"point has {len(p)} coordinates for {root.nvars} variables")
    node, q = root, list(p)
    while True:
        children = node.children
        if isinstance(children, Leaf):
            return Location(node, q)
        if isinstance(children, LambdaFamily):
            lam = family_lambda(children, q)
            child = children.expanded.get(lam)
            if child is None:
                return Location(node, q, (children, lam))
            node, q = child, preimages(child.edge_in, q)[0]  # type: ignore[arg-type]
            continue
        if isinstance(children, Expanded):
            step = next(
                (
                    (child, pre[0])
                    for child in children.children
                    if (pre := preimages(child.edge_in, q))  # type: ignore[arg-type]
                ),
                None,
            )
            if step is None:
                raise UncoveredPointError("no branch reaches the point", point=[str(v) for v in p])
            node, q = step
            continue
        raise MonomializeError(f"node {node!r} has not been built")


@dataclass(frozen=True)
class ChartAtPoint:
    """The branch covering a point, the quadrant of its preimage and the leaf certificates."""

    path: TransformPath
    quadrant: SubQuadrant
    certificates: tuple[NormalCertificate, ...]
    preimage: tuple[Any, ...]


def chart_at_point(
    targets: Sequence[Series],
    p: Sequence[Any],
    config: TreeConfig | None = None,
    root: TreeNode | None = None,
) -> ChartAtPoint:
    """Find the branch whose chart contains p, expanding λ charts on demand.

    Raises:
        UncoveredPointError: When p sits on an exceptional locus, or no chart
            is reached within max_depth expansions
    """
    config = config or TreeConfig.from_settings()
    root = root or monomialize(targets, config)
    for _ in range(config.max_depth + 1):
        location = locate(root, p)
        if location.missing is None:
            leaf = location.node.children
            certificates = leaf.certificates if isinstance(leaf, Leaf) else ()
            logger.debug(f"point {[str(v) for v in p]} lies in the chart {location.node.path.describe()}")
            return ChartAtPoint(
                location.node.path,
                SubQuadrant.around(location.point),
                certificates,
                tuple(location.point),
            )
        family, lam = location.missing
        family.expand(lam)
    raise UncoveredPointError(f"no chart reached after {config.max_depth} expansions", point=[str(v) for v in p])
