"""Fiber cutting: the critical locus of φ along the fibers of Π_n."""
from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass
from dataclasses import field
from fractions import Fraction

import numpy as np
from django.conf import settings
from scipy.optimize import minimize_scalar
from series.core import Series
from series.core import content_normalized
from series.numeric import evaluate_float
from series.numeric import evaluate_grid
from series.numeric import gradient
from utils.parallel import parallel_map

from .errors import FiberCutPreconditionError
from .errors import FiberGeomError
from .errors import FrameDegenerateError
from .errors import StratifyFirstError
from .frames import dimension_sampled
from .frames import rank_at
from .manifold import ManifoldSpec
from .manifold import build_phi
from .manifold import grid_axes
from .manifold import sample_points
from .symbolic import drop_factors
from .symbolic import symbols_for

logger = logging.getLogger("monoforge")

ROOT_IMAGINARY_TOLERANCE = 1e-9

PolyVector = list[Series]


def _dot(u: PolyVector, v: PolyVector, nvars: int) -> Series:
    total = Series.zero(nvars)
    for a, b in zip(u, v, strict=True):
        if not a.is_zero() and not b.is_zero():
            total = total + a * b
    return total


def _reduce(v: PolyVector, basis: Sequence[PolyVector], nvars: int) -> PolyVector:
    # v ← ⟨u, u⟩·v − ⟨v, u⟩·u keeps every entry polynomial
    for u in basis:
        uu, vu = _dot(u, u, nvars), _dot(v, u, nvars)
        if vu.is_zero():
            continue
        v = [uu * vi - vu * ui for vi, ui in zip(v, u, strict=True)]
    return v


def fiber_frame_polynomials(m: ManifoldSpec) -> list[PolyVector]:
    """Polynomial vectors in the y block spanning the fiber tangent spaces where the frame is nondegenerate.

    Gram–Schmidt without normalization runs over the y parts of ∇f_1, …,
    ∇f_m and then over e_{n+1}, …, e_{n+k}; the vectors produced from the
    unit vectors are the fiber directions.

    Raises:
        FrameDegenerateError: When the gradient of an equation vanishes identically
    """
    n, nvars = m.split_n, m.nvars
    basis: list[PolyVector] = []
    for index, f in enumerate(m.eqs, start=1):
        grad = gradient(f)
        if all(g.is_zero() for g in grad):
            raise FrameDegenerateError(f"the gradient of equation {index} vanishes identically", equation=index)
        v = _reduce(grad[n:], basis, nvars)
        if any(not c.is_zero() for c in v):
            basis.append(v)
    fiber: list[PolyVector] = []
    for j in range(m.k):
        e = [Series.constant(nvars, 1 if i == j else 0) for i in range(m.k)]
        v = _reduce(e, basis, nvars)
        if any(not c.is_zero() for c in v):
            fiber.append(v)
            basis.append(v)
    logger.debug(f"symbolic fiber frame with {len(fiber)} vector(s)")
    return fiber


def positive_factors(m: ManifoldSpec) -> list[Series]:
    """Polynomials without zeros on M: the inequalities and every r_i² − z_i²."""
    radii = [
        Series.constant(m.nvars, r * r) - Series.variable(m.nvars, i) ** 2
        for i, r in enumerate(m.polyradius, start=1)
    ]
    return [*m.ineqs, *radii]


def critical_set_equations(m: ManifoldSpec) -> list[Series]:
    """Polynomial equations cutting out, on M, the points where φ restricted to the fiber is critical.

    Each equation is ⟨∇φ, b⟩ for a vector b of the polynomial fiber frame,
    with the factors that have no zeros on M removed, scaled to primitive
    integer coefficients with a positive leading term.

    Raises:
        FrameDegenerateError: When the gradient of an equation vanishes identically
    """
    n = m.split_n
    grad_phi = gradient(build_phi(m))[n:]
    symbols = symbols_for(m.nvars, m.names)
    positive = positive_factors(m)
    equations: list[Series] = []
    for b in fiber_frame_polynomials(m):
        pairing = _dot(grad_phi, b, m.nvars)
        reduced = content_normalized(drop_factors(pairing, positive, symbols))
        if reduced.is_zero():
            raise FrameDegenerateError("φ is constant along the fibers")
        if reduced not in equations:
            equations.append(reduced)
    logger.info(f"{len(equations)} critical set equation(s)")
    return equations


def _require_line_fibers(m: ManifoldSpec) -> None:
    if m.k != 1 or m.eqs:
        raise FiberCutPreconditionError("fiber critical points are computed on open sets with one fiber coordinate")


def fiber_critical_points(
    m: ManifoldSpec,
    x: Sequence[float],
    equations: Sequence[Series] | None = None,
) -> list[float]:
    """The y with (x, y) in M solving every critical equation, by numpy polynomial roots.

    Raises:
        FiberCutPreconditionError: Unless M is open with a single fiber coordinate
    """
    _require_line_fibers(m)
    equations = critical_set_equations(m) if equations is None else equations
    common: set[float] | None = None
    for eq in equations:
        degree = max(exp[-1] for exp, _ in eq.items())
        coeffs = [0.0] * (degree + 1)
        for exp, coef in eq.items():
            base = math.prod(float(v) ** e for v, e in zip(x, exp[:-1], strict=True))
            coeffs[degree - exp[-1]] += float(coef) * base
        roots = [r.real for r in np.roots(coeffs) if abs(r.imag) <= ROOT_IMAGINARY_TOLERANCE * max(1, abs(r))]
        inside = {round(float(y), 12) for y in roots if m.contains([*x, float(y)])}
        common = inside if common is None else common & inside
    return sorted(common or ())


def fiber_maximizers(m: ManifoldSpec, x: Sequence[float], grid: int) -> list[float]:
    """Local maxima of φ on the fiber over x, found on the grid and refined by a bounded scalar search.

    This uses values of φ only, so it serves as an independent check of the
    critical set equations.

    Raises:
        FiberCutPreconditionError: Unless M is open with a single fiber coordinate
    """
    _require_line_fibers(m)
    phi = build_phi(m)
    ys = grid_axes(m.polyradius[-1:], grid)[0]
    mesh = [np.full(ys.shape, float(v)) for v in x] + [ys]
    values = evaluate_grid(phi, mesh)
    inside = np.ones(ys.shape, dtype=bool)
    for g in m.ineqs:
        inside &= evaluate_grid(g, mesh) > 0
    values = np.where(inside, values, -np.inf)

    def along(y: float) -> float:
        return evaluate_float(phi, [*x, y])

    maxima = []
    for t in range(1, len(ys) - 1):
        if inside[t] and values[t] >= values[t - 1] and values[t] > values[t + 1]:
            bracket = (float(ys[t - 1]), float(ys[t + 1]))
            found = minimize_scalar(lambda y: -along(y), bounds=bracket, method="bounded", options={"xatol": 1e-12})
            maxima.append(float(found.x))
    return maxima


def compatible_polydisk_check(m: ManifoldSpec, radius: Sequence[Fraction], grid: int | None = None) -> bool:
    """True when no sampled fiber of M meets Δ_{r′} and also leaves it.

    Base points x run over the grid of the first n radii of r′, fiber points
    over the grid of the full fiber radii. Equations count as satisfied
    within one grid step.
    """
    radius = tuple(Fraction(r) for r in radius)
    if len(radius) != m.nvars or any(not 0 < s <= r for s, r in zip(radius, m.polyradius, strict=True)):
        raise FiberGeomError("r′ must satisfy 0 < r′ ≤ r componentwise")
    if m.k == 0:
        return True
    grid = grid or settings.MONO_FORGE_GRID
    n = m.split_n
    axes = grid_axes(radius[:n] + m.polyradius[n:], grid)
    mesh = np.meshgrid(*axes, indexing="ij")
    member = np.ones(mesh[0].shape, dtype=bool)
    for f in m.eqs:
        member &= np.abs(evaluate_grid(f, mesh)) <= 1.0 / grid
    for g in m.ineqs:
        member &= evaluate_grid(g, mesh) > 0
    within = np.ones(mesh[0].shape, dtype=bool)
    for i in range(n, m.nvars):
        within &= np.abs(mesh[i]) < float(radius[i])
    fiber_axes = tuple(range(n, m.nvars))
    meets = np.any(member & within, axis=fiber_axes)
    leaves = np.any(member & ~within, axis=fiber_axes)
    bad = np.argwhere(np.atleast_1d(meets & leaves))
    if len(bad):
        witness = [float(axes[k][i]) for k, i in enumerate(bad[0])] if n else []
        logger.debug(f"the fiber over {witness} meets Δ_r′ and leaves it")
        return False
    return True


@dataclass(frozen=True)
class ButterflyReport:
    """Per fiber coordinate y_i, the base coordinate x_j (1-based) dominating it on the samples."""

    witnesses: tuple[int | None, ...]
    counter_example: tuple[float, ...] | None = None

    @property
    def ok(self) -> bool:
        """True when every fiber coordinate has a witness."""
        return all(j is not None for j in self.witnesses)


def butterfly_check(m: ManifoldSpec, grid: int) -> ButterflyReport:
    """Search, for each y_i, a fixed x_j with |y_i| < |x_j| at every sample point of M."""
    n = m.split_n
    samples = np.array(sample_points(m, grid)).reshape(-1, m.nvars)
    witnesses: list[int | None] = []
    counter: tuple[float, ...] | None = None
    for i in range(n, m.nvars):
        dominated = [bool(np.all(np.abs(samples[:, i]) < np.abs(samples[:, j]))) for j in range(n)]
        witness = next((j + 1 for j, ok in enumerate(dominated) if ok), None)
        witnesses.append(witness)
        if witness is None and counter is None and len(samples):
            beaten = np.all(np.abs(samples[:, [i]]) >= np.abs(samples[:, :n]), axis=1)
            row = int(np.argmax(beaten)) if beaten.any() else 0
            counter = tuple(float(v) for v in samples[row])
    report = ButterflyReport(tuple(witnesses), counter)
    logger.debug(f"butterfly witnesses {report.witnesses}")
    return report


@dataclass
class FiberCutReport:
    """Equations of the critical set A, a compatible polydisk and the sampled checks."""

    equations: list[Series]
    rank: int
    dimension: int
    radius: tuple[Fraction, ...]
    critical_dimension: int
    projection_samples: int = 0
    projection_failures: list[tuple[float, ...]] = field(default_factory=list)
    critical_points: list[tuple[float, ...]] = field(default_factory=list)

    @property
    def dimension_drops(self) -> bool:
        """True when dim A < dim M on the samples."""
        return self.critical_dimension < self.dimension


def suggest_radius(m: ManifoldSpec, halvings: int, grid: int | None = None) -> tuple[Fraction, ...]:
    """The smallest r/2^t, t ≤ halvings, that passes compatible_polydisk_check, else r."""
    best = m.polyradius
    for t in range(1, halvings + 1):
        candidate = tuple(r / 2**t for r in m.polyradius)
        if compatible_polydisk_check(m, candidate, grid):
            best = candidate
    return best


def fiber_cut(
    m: ManifoldSpec,
    grid: int = 32,
    halvings: int = 4,
    sweep_grid: int | None = None,
    threads: int | None = None,
) -> FiberCutReport:
    """Replace M by the fiberwise critical locus A of φ, which has the same projection and lower dimension.

    Args:
        m: The manifold
        grid: Sampling grid for ranks, the critical set and the projection check
        halvings: How far the compatible polydisk search shrinks r
        sweep_grid: Grid for the compatible polydisk fiber sweeps
        threads: Upper bound on worker threads
    Returns:
        The report
    Raises:
        StratifyFirstError: When the projection rank is not constant on the samples
        FiberCutPreconditionError: When there are no samples or no fiber directions
    """
    samples = sample_points(m, grid, threads)
    if not samples:
        raise FiberCutPreconditionError("no sample points on the manifold")
    ranks = sorted(set(parallel_map(lambda z: rank_at(m, z), samples, threads=threads)))
    if len(ranks) > 1:
        raise StratifyFirstError(f"projection rank takes the values {ranks}, stratify with rank_at first", ranks=ranks)
    rank = ranks[0]
    if rank >= m.d:
        raise FiberCutPreconditionError(f"rank {rank} equals the dimension {m.d}, there is no fiber to cut")
    equations = critical_set_equations(m)
    critical = m.with_equations(equations)
    critical_dimension = dimension_sampled(critical, sample_points(critical, grid, threads))
    report = FiberCutReport(
        equations=equations,
        rank=rank,
        dimension=m.d,
        radius=suggest_radius(m, halvings, sweep_grid),
        critical_dimension=critical_dimension,
    )
    if m.k == 1 and not m.eqs:
        bases = sorted({z[: m.split_n] for z in samples})
        found = parallel_map(lambda x: fiber_critical_points(m, x, equations), bases, threads=threads)
        for x, ys in zip(bases, found, strict=True):
            report.projection_samples += 1
            if not ys:
                report.projection_failures.append(tuple(x))
            report.critical_points.extend((*x, y) for y in ys)
    if not report.dimension_drops:
        logger.warning(f"sampled dimension of A is {critical_dimension}, not below {m.d}")
    if report.projection_failures:
        logger.warning(f"{len(report.projection_failures)} sampled fiber(s) without a critical point")
    logger.info(f"fiber cut: rank {rank}, {len(equations)} equation(s), dim A {critical_dimension}")
    return report
