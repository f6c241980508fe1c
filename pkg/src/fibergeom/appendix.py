"""The worked instance M = {y > x} ⊂ Δ_{(1,1)}, whose fiber critical set misses a whole neighbourhood of 0."""
import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

import sympy
from series.core import Series

from .cutting import critical_set_equations
from .errors import FiberGeomError
from .manifold import ManifoldSpec
from .symbolic import symbols_for
from .symbolic import to_sympy

logger = logging.getLogger("monoforge")


def appendix_manifold() -> ManifoldSpec:
    """M = {(x, y) ∈ Δ_{(1,1)} : y > x} projected to x."""
    y_minus_x = Series(2, {(0, 1): 1, (1, 0): -1})
    return ManifoldSpec((Fraction(1), Fraction(1)), 1, (), (y_minus_x,), ("x", "y"))


@dataclass(frozen=True)
class AppendixReport:
    """The exact computation behind the empty germ of the critical set."""

    phi: str
    equation: str
    roots: tuple[str, str]
    root_formula: str
    epsilon: str
    bound: str
    checks: dict[str, bool]

    @property
    def empty(self) -> bool:
        """True when every identity of the certificate holds."""
        return all(self.checks.values())

    @property
    def verdict(self) -> str:
        """The statement certified by the checks."""
        return f"A ∩ Δ_{{({self.epsilon}, {self.bound})}} = ∅: {'true' if self.empty else 'false'}"

    def as_dict(self) -> dict[str, Any]:
        """JSON friendly form."""
        return {
            "phi": self.phi,
            "equation": self.equation,
            "roots": list(self.roots),
            "root_formula": self.root_formula,
            "epsilon": self.epsilon,
            "bound": self.bound,
            "checks": self.checks,
            "verdict": self.verdict,
        }


def _unicode(expr: sympy.Expr) -> str:
    text = sympy.sstr(expr).replace("**2", "²").replace("**3", "³").replace("sqrt", "√")
    return re.sub(r"√\((\d+)\)", r"√\1", text)


def _phi_factors(m: ManifoldSpec) -> str:
    names = m.names or ()
    parts = [f"({g.pretty(names)})" for g in m.ineqs]
    parts += [f"({r * r} − {name}²)" for r, name in zip(m.polyradius, names, strict=True)]
    return "".join(parts)


def appendix_demo() -> AppendixReport:
    """Derive the critical equation of φ = (y−x)(1−x²)(1−y²), solve it exactly and certify the empty germ.

    The roots are r± = x/3 ± √(x²+3)/3. The upper root is increasing and
    equals √2/3 at x = −ε, and r₋(x) = −r₊(−x), so both roots have absolute
    value above √2/3 for |x| < ε. A ∩ Δ_{(ε, √2/3)} is then empty.

    Raises:
        FiberGeomError: When the critical set is not a single quadratic in y
    """
    m = appendix_manifold()
    x, y = symbols_for(2, m.names)
    equations = critical_set_equations(m)
    if len(equations) != 1:
        raise FiberGeomError(f"expected one critical equation, got {len(equations)}")
    quadratic = to_sympy(equations[0], (x, y))
    lower, upper = sorted(sympy.solve(quadratic, y), key=lambda r: float(r.subs(x, 0)))
    bound = sympy.sqrt(2) / 3
    crossings = sympy.solve(sympy.Eq(upper, bound), x)
    if len(crossings) != 1:
        raise FiberGeomError(f"the upper root meets √2/3 {len(crossings)} times")
    epsilon = sympy.nsimplify(-crossings[0])
    root = sympy.sqrt(x**2 + 3)
    slope = sympy.diff(upper, x)
    checks = {
        "roots_match": (
            sympy.simplify(upper - (x / 3 + root / 3)) == 0 and sympy.simplify(lower - (x / 3 - root / 3)) == 0
        ),
        "factorization": sympy.expand(3 * (y - upper) * (y - lower) - quadratic) == 0,
        "epsilon_positive": bool(epsilon > 0),
        # r₊′ = (1 + x/√(x²+3))/3 and (x² + 3) − x² = 3 > 0, so |x| < √(x²+3)
        "upper_increasing": sympy.simplify(slope - (1 + x / root) / 3) == 0 and sympy.expand(x**2 + 3 - x**2) > 0,
        "upper_at_minus_epsilon": sympy.simplify(upper.subs(x, -epsilon) - bound) == 0,
        "symmetry": sympy.simplify(lower + upper.subs(x, -x)) == 0,
    }
    report = AppendixReport(
        phi=_phi_factors(m),
        equation=equations[0].pretty(m.names),
        roots=(_unicode(upper), _unicode(lower)),
        root_formula="y = x/3 ± √(x²+3)/3",
        epsilon=_unicode(epsilon),
        bound=_unicode(bound),
        checks={name: bool(ok) for name, ok in checks.items()},
    )
    logger.info(report.verdict)
    return report
