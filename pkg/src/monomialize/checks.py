"""Independent checks of a built tree: *-monomialization, faithfulness and leaf soundness."""
import logging
from collections.abc import Sequence
from dataclasses import dataclass
from dataclasses import field

from series.core import Series
from series.core import truncate
from series.core import unit_exponent
from series.normality import Normal
from series.normality import NotNormal
from series.normality import is_normal
from transforms.elementary import BlowUp
from transforms.substitution import compose_path
from transforms.substitution import path_divisor

from .tree import Leaf
from .tree import TreeNode
from .tree import iter_leaves

logger = logging.getLogger("monoforge")


@dataclass(frozen=True)
class StarViolation:
    """A critical variable that is not normal at a leaf below its blow-up."""

    path: str
    edge: int
    variable: int
    image: str
    verdict: str


@dataclass
class StarReport:
    """Outcome of star_check."""

    checked: int = 0
    violations: list[StarViolation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        """True when no violation was found."""
        return not self.violations


def star_check(root: TreeNode) -> StarReport:
    """Check that every blow-up's critical variable is normal at every expanded leaf below it.

    The image of X_j is recomputed from scratch along the part of the branch
    below the blow-up, independent of what the tree tracks. A truncated image
    counts as normal when its least monomial is the one X_j is carried to.
    """
    report = StarReport()
    for leaf in iter_leaves(root):
        steps = leaf.path.steps
        for index, nu in enumerate(steps):
            if not isinstance(nu, BlowUp):
                continue
            below = steps[index + 1 :]
            image = compose_path(below, Series.variable(leaf.nvars, nu.j))
            result = is_normal(image, path_divisor(below, [unit_exponent(leaf.nvars, nu.j)]))
            report.checked += 1
            if not isinstance(result, Normal):
                verdict = "not_normal" if isinstance(result, NotNormal) else "unknown_at_truncation"
                report.violations.append(StarViolation(leaf.path.describe(), index, nu.j, image.pretty(), verdict))
    if report.violations:
        logger.warning(f"star check found {len(report.violations)} violation(s) in {report.checked} checks")
    return report


def branch_faithfulness(root: TreeNode, targets: Sequence[Series] | None = None) -> list[str]:
    """Recompose every target along every expanded branch and compare with the stored series.

    Returns:
        One message per mismatch, empty when the tree is faithful
    """
    targets = root.targets if targets is None else tuple(targets)
    failures = []
    for leaf in iter_leaves(root):
        for index, target in enumerate(targets):
            if compose_path(leaf.path, target) != leaf.series_state[index]:
                failures.append(f"target {index} differs at {leaf.path.describe()}")
    return failures


def leaf_soundness(root: TreeNode) -> list[str]:
    """Check that X^α·U rebuilt from each leaf certificate equals the tracked series.

    Returns:
        One message per mismatch, empty when every leaf is sound
    """
    failures = []
    for leaf in iter_leaves(root):
        if not isinstance(leaf.children, Leaf):
            continue
        certificates = leaf.children.certificates
        if len(certificates) != len(leaf.series_state):
            failures.append(
                f"{leaf.path.describe()}: {len(certificates)} certificates for {len(leaf.series_state)} series"
            )
            continue
        for index, (cert, f) in enumerate(zip(certificates, leaf.series_state, strict=True)):
            rebuilt = cert.reconstruct()
            expected = f if rebuilt.trunc is None else truncate(f, rebuilt.trunc)
            if rebuilt != expected or cert.unit_constant == 0:
                failures.append(f"{leaf.path.describe()}: certificate {index} does not rebuild {f.pretty()}")
    return failures
