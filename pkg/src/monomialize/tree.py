"""The lazily expanded admissible tree and its bookkeeping types."""
from __future__ import annotations

import logging
import threading
from collections.abc import Callable
from collections.abc import Iterator
from dataclasses import dataclass
from dataclasses import field
from fractions import Fraction

from django.conf import settings
from series.core import Series
from series.normality import NormalCertificate
from transforms.elementary import INF
from transforms.elementary import BlowUp
from transforms.elementary import ElementaryTransform
from transforms.elementary import Lambda
from transforms.elementary import TransformPath
from transforms.elementary import format_lambda
from transforms.elementary import lambda_sort_key
from transforms.elementary import parse_lambda
from transforms.substitution import apply

from .errors import DepthExceededError
from .errors import MonomializeError
from .errors import NotAFamilyError

logger = logging.getLogger("monoforge")


@dataclass(frozen=True)
class TreeConfig:
    """Per run settings, defaulting to the MONO_FORGE_* settings."""

    max_depth: int = 64
    trunc: int = 16
    max_trunc: int = 32
    lambda_seed: tuple[Lambda, ...] = (Fraction(0), Fraction(1), Fraction(-1), INF)
    check_measure: bool = False

    @classmethod
    def from_settings(cls, **overrides: object) -> TreeConfig:
        """Build a config from django settings, with explicit overrides winning."""
        values: dict[str, object] = {
            "max_depth": settings.MONO_FORGE_MAX_DEPTH,
            "trunc": settings.MONO_FORGE_TRUNC,
            "max_trunc": settings.MONO_FORGE_MAX_TRUNC,
            "lambda_seed": tuple(parse_lambda(s) for s in settings.MONO_FORGE_LAMBDA_SEEDS),
            "check_measure": settings.MONO_FORGE_CHECK_MEASURE,
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)  # type: ignore[arg-type]

    def initial_lambdas(self) -> list[Lambda]:
        """{0, ∞} together with the seeds, rationals first and infinity last."""
        lams: set[Lambda] = {Fraction(0), INF, *self.lambda_seed}
        return sorted(lams, key=lambda_sort_key)


@dataclass(frozen=True, order=True)
class TerminationMeasure:
    """The well-founded measure (stage dimension, regularity order, α_l/l), compared lexicographically."""

    n: int
    d: int
    alpha_over_l: tuple[Fraction, ...]

    def describe(self) -> str:
        """Short human form."""
        return f"(n={self.n}, d={self.d}, α/l=({', '.join(str(a) for a in self.alpha_over_l)}))"


@dataclass
class Leaf:
    """Every tracked series of the node is certified normal."""

    certificates: tuple[NormalCertificate, ...]


@dataclass
class Expanded:
    """Fully expanded branching: a single edge, or the two signs of a ramification."""

    children: list[TreeNode] = field(default_factory=list)


class LambdaFamily:
    """The blow-up charts π_{i,j}^λ for λ ∈ ℚ ∪ {∞}, expanded on demand.

    Each λ is expanded at most once. Expansion of one family is serialized by
    a lock, so distinct families can be expanded from different threads.
    """

    def __init__(
        self,
        node: TreeNode,
        i: int,
        j: int,
        build: Callable[[TreeNode], None],
        max_depth: int | None = None,
    ) -> None:
        """Create the family of charts below node, with build filling in each new child."""
        self.node = node
        self.i = i
        self.j = j
        self._build = build
        self._max_depth = max_depth
        self.expanded: dict[Lambda, TreeNode] = {}
        self._lock = threading.Lock()

    def chart(self, lam: Lambda) -> BlowUp:
        """The blow-up chart for λ."""
        return BlowUp.of(self.i, self.j, lam)

    def expand(self, lam: Lambda) -> TreeNode:
        """Return the child for λ, computing it the first time it is asked for."""
        key: Lambda = INF if lam == INF else Fraction(lam)
        with self._lock:
            if key not in self.expanded:
                logger.debug(f"expanding π[{self.i},{self.j}] at λ = {format_lambda(key)}")
                child = self.node.add_child(self.chart(key), attach=False, max_depth=self._max_depth)
                self._build(child)
                self.expanded[key] = child
            return self.expanded[key]

    def sorted_items(self) -> list[tuple[Lambda, TreeNode]]:
        """The expanded charts, rationals ascending and infinity last."""
        with self._lock:
            return sorted(self.expanded.items(), key=lambda kv: lambda_sort_key(kv[0]))


Children = Expanded | LambdaFamily | Leaf


class TreeNode:
    """A node of the admissible tree.

    series_state holds the images of the targets, followed by the images of
    the critical variable of every blow-up on the way down from the root.
    """

    def __init__(
        self,
        series_state: tuple[Series, ...],
        *,
        edge_in: ElementaryTransform | None = None,
        parent: TreeNode | None = None,
        target_count: int | None = None,
    ) -> None:
        """Create a node, root nodes count all their series as targets unless told otherwise."""
        if not series_state:
            raise MonomializeError("a tree node needs at least one series")
        self.series_state = series_state
        self.edge_in = edge_in
        self.parent = parent
        self.children: Children | None = None
        self.measure: TerminationMeasure | None = None
        self.path: TransformPath = parent.path.then(edge_in) if parent and edge_in else TransformPath()
        if target_count is not None:
            self.target_count = target_count
        elif parent is not None:
            self.target_count = parent.target_count
        else:
            self.target_count = len(series_state)

    @property
    def nvars(self) -> int:
        """The number of variables of the tracked series."""
        return self.series_state[0].nvars

    @property
    def depth(self) -> int:
        """The number of edges from the root."""
        return len(self.path)

    @property
    def targets(self) -> tuple[Series, ...]:
        """The images of the targets."""
        return self.series_state[: self.target_count]

    def is_leaf(self) -> bool:
        """True for certified leaves."""
        return isinstance(self.children, Leaf)

    def add_child(self, nu: ElementaryTransform, *, attach: bool = True, max_depth: int | None = None) -> TreeNode:
        """Create the child reached through nu.

        The tracked series are pulled back along nu, and a blow-up appends its
        critical variable. With attach the child is added to an Expanded list.
        """
        if max_depth is not None and self.depth + 1 > max_depth:
            raise DepthExceededError(
                f"depth bound {max_depth} exceeded",
                trace=[m.describe() for m in self.measure_trace()],
                path=self.path.describe(),
            )
        state = [apply(nu, s) for s in self.series_state]
        j = nu.critical_variable()
        if j is not None:
            state.append(Series.variable(self.nvars, j))
        child = TreeNode(tuple(state), edge_in=nu, parent=self)
        if attach:
            if self.children is None:
                self.children = Expanded()
            if not isinstance(self.children, Expanded):
                raise MonomializeError("node already has non expanded children")
            self.children.children.append(child)
        return child

    def measure_trace(self) -> list[TerminationMeasure]:
        """The termination measures recorded from the root down to this node."""
        trace: list[TerminationMeasure] = []
        node: TreeNode | None = self
        while node is not None:
            if node.measure is not None:
                trace.append(node.measure)
            node = node.parent
        return trace[::-1]

    def iter_nodes(self) -> Iterator[TreeNode]:
        """Depth first iteration over the expanded part of the subtree."""
        yield self
        if isinstance(self.children, Expanded):
            for child in self.children.children:
                yield from child.iter_nodes()
        elif isinstance(self.children, LambdaFamily):
            for _, child in self.children.sorted_items():
                yield from child.iter_nodes()

    def __repr__(self) -> str:
        """Short human form."""
        return f"TreeNode(depth={self.depth}, path={self.path.describe()})"


def expand_lambda(node: TreeNode | LambdaFamily, lam: Lambda) -> TreeNode:
    """Expand a blow-up family at λ, returning the memoized child when it exists.

    Raises:
        NotAFamilyError: When node does not branch over a λ-family
    """
    family = node if isinstance(node, LambdaFamily) else node.children
    if not isinstance(family, LambdaFamily):
        raise NotAFamilyError("node does not branch over a blow-up family")
    return family.expand(lam)


def iter_leaves(root: TreeNode) -> Iterator[TreeNode]:
    """The expanded leaves in depth first order."""
    return (node for node in root.iter_nodes() if node.is_leaf())


def iter_families(root: TreeNode) -> Iterator[LambdaFamily]:
    """The blow-up families of the expanded tree."""
    return (node.children for node in root.iter_nodes() if isinstance(node.children, LambdaFamily))
