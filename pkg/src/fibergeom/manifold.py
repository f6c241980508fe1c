"""Manifolds given by polynomial equations and inequalities on a polydisk."""
from __future__ import annotations

import itertools
import logging
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

import numpy as np
from series.core import Series
from series.numeric import evaluate_float
from series.numeric import evaluate_grid
from series.numeric import jacobian_at
from utils.parallel import parallel_map

from .errors import FiberGeomError

logger = logging.getLogger("monoforge")

NEWTON_STEPS = 25
NEWTON_TOLERANCE = 1e-12


@dataclass(frozen=True)
class ManifoldSpec:
    """{z ∈ Δ_r : f_1(z) = … = f_m(z) = 0, g_1(z) > 0, …, g_q(z) > 0}, split as z = (x, y) with x in ℝ^n."""

    polyradius: tuple[Fraction, ...]
    split_n: int
    eqs: tuple[Series, ...] = ()
    ineqs: tuple[Series, ...] = ()
    names: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        """The split fits the variables and every polynomial lives in them."""
        object.__setattr__(self, "polyradius", tuple(Fraction(r) for r in self.polyradius))
        object.__setattr__(self, "eqs", tuple(self.eqs))
        object.__setattr__(self, "ineqs", tuple(self.ineqs))
        if any(r <= 0 for r in self.polyradius):
            raise FiberGeomError("polyradius entries must be positive")
        if not 0 <= self.split_n <= self.nvars:
            raise FiberGeomError(f"split {self.split_n} outside 0..{self.nvars}")
        if len(self.eqs) > self.nvars:
            raise FiberGeomError(f"{len(self.eqs)} equations in {self.nvars} variables")
        for f in (*self.eqs, *self.ineqs):
            if f.nvars != self.nvars:
                raise FiberGeomError(f"polynomial in {f.nvars} variables on a {self.nvars} dimensional polydisk")
            if not f.exact:
                raise FiberGeomError("manifolds are defined by polynomials, got a truncated series")
        if self.names is not None and len(self.names) != self.nvars:
            raise FiberGeomError("one name per variable")

    @property
    def nvars(self) -> int:
        """n + k."""
        return len(self.polyradius)

    @property
    def k(self) -> int:
        """The number of fiber coordinates."""
        return self.nvars - self.split_n

    @property
    def d(self) -> int:
        """The expected dimension n + k − m."""
        return self.nvars - len(self.eqs)

    def residual(self, z: Sequence[float]) -> float:
        """The largest |f_i(z)|."""
        return max((abs(evaluate_float(f, z)) for f in self.eqs), default=0.0)

    def contains(self, z: Sequence[Any], tolerance: float = 1e-9) -> bool:  # noqa: ANN401
        """Membership, the equations within tolerance."""
        if not all(abs(float(v)) < float(r) for v, r in zip(z, self.polyradius, strict=True)):
            return False
        point = [float(v) for v in z]
        if self.residual(point) > tolerance:
            return False
        return all(evaluate_float(g, point) > 0 for g in self.ineqs)

    def with_equations(self, extra: Sequence[Series]) -> ManifoldSpec:
        """The same manifold cut by more equations."""
        return ManifoldSpec(self.polyradius, self.split_n, (*self.eqs, *extra), self.ineqs, self.names)


def build_phi(m: ManifoldSpec) -> Series:
    """φ = g_1 ⋯ g_q · (r_1² − z_1²) ⋯ (r_N² − z_N²).

    φ is positive on M and vanishes on the frontier of the polydisk and of the inequalities.
    """
    phi = Series.constant(m.nvars, 1)
    for g in m.ineqs:
        phi = phi * g
    for i, r in enumerate(m.polyradius, start=1):
        z = Series.variable(m.nvars, i)
        phi = phi * (Series.constant(m.nvars, r * r) - z * z)
    return phi


def grid_axes(polyradius: Sequence[Fraction], grid: int) -> list[np.ndarray]:
    """Cell centres with spacing 1/grid across each radius."""
    step = 1.0 / grid
    return [np.arange(-float(r) + step / 2, float(r), step) for r in polyradius]


def newton_project(m: ManifoldSpec, z: Sequence[float]) -> np.ndarray | None:
    """Gauss–Newton steps onto the equations, None when they do not converge."""
    point = np.asarray(z, dtype=float)
    for _ in range(NEWTON_STEPS):
        values = np.array([evaluate_float(f, point) for f in m.eqs])
        if np.max(np.abs(values)) <= NEWTON_TOLERANCE:
            return point
        step, *_ = np.linalg.lstsq(jacobian_at(m.eqs, point), -values, rcond=None)
        point = point + step
    return point if m.residual(point) <= NEWTON_TOLERANCE else None


def sample_points(m: ManifoldSpec, grid: int, threads: int | None = None) -> list[tuple[float, ...]]:
    """Deterministic sample points of M.

    Open manifolds keep the grid cell centres satisfying the inequalities.
    Otherwise every cell centre is projected onto the equations, and the
    projections inside M are kept, rounded and without repeats.
    """
    axes = grid_axes(m.polyradius, grid)
    if not m.eqs:
        mesh = np.meshgrid(*axes, indexing="ij")
        mask = np.ones(mesh[0].shape, dtype=bool)
        for g in m.ineqs:
            mask &= evaluate_grid(g, mesh) > 0
        return [tuple(float(axes[k][i]) for k, i in enumerate(index)) for index in np.argwhere(mask)]

    def project(start: tuple[float, ...]) -> tuple[float, ...] | None:
        point = newton_project(m, start)
        if point is None or not m.contains(point):
            return None
        return tuple(float(v) for v in np.round(point, 12))

    projected = parallel_map(project, list(itertools.product(*(axis.tolist() for axis in axes))), threads=threads)
    samples = sorted({p for p in projected if p is not None})
    logger.debug(f"{len(samples)} sample point(s) on a manifold of dimension {m.d}")
    return samples


def doubled(m: ManifoldSpec) -> ManifoldSpec:
    """M̃ = {(r′, z) : z ∈ M ∩ Δ_{r′}, 0 < r′ < r} in 2(n + k) variables.

    The split is n + k + n, so the fiber over (r′, x) is (M ∩ Δ_{r′})_x, and
    M̃ has dimension n + k + d. Every fiber coordinate y_i is bounded by the
    base coordinate r′_{n+i}.
    """
    total = 2 * m.nvars
    zs = [Series.variable(total, m.nvars + i) for i in range(1, m.nvars + 1)]

    def lift(f: Series) -> Series:
        terms = {(0,) * m.nvars + exp: c for exp, c in f.items()}
        return Series(total, terms)

    ineqs = [lift(g) for g in m.ineqs]
    for i, r in enumerate(m.polyradius, start=1):
        radius = Series.variable(total, i)
        ineqs.append(radius)
        ineqs.append(Series.constant(total, r) - radius)
        ineqs.append(radius * radius - zs[i - 1] * zs[i - 1])
    names = None
    if m.names is not None:
        names = tuple(f"{name}′" for name in m.names) + m.names
    return ManifoldSpec(
        m.polyradius + m.polyradius,
        m.nvars + m.split_n,
        tuple(lift(f) for f in m.eqs),
        tuple(ineqs),
        names,
    )

