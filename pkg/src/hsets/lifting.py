"""Lifting an H-basic set to the graphs of its defining germs."""
from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

import numpy as np
from django.conf import settings
from series.core import Series
from series.core import embed
from series.core import evaluate
from series.numeric import evaluate_grid

from .errors import BoundTooSmallError
from .errors import HSetError
from .sets import HBasicSet

logger = logging.getLogger("monoforge")


def coefficient_sum_bound(g: Series, polyradius: Sequence[Fraction]) -> Fraction:
    """Σ |c_β|·r^β, an upper bound for |g| on Δ_r when g is a polynomial."""
    total = Fraction(0)
    for exp, coef in g.items():
        term = abs(coef)
        for e, r in zip(exp, polyradius, strict=True):
            term *= Fraction(r) ** e
        total += term
    return total


def sampled_witness(g: Series, region: HBasicSet, bound: Fraction, grid: int) -> tuple[float, ...] | None:
    """The cell centre of Δ_r where |g| is largest, when it reaches the bound."""
    axes = region.grid_axes(grid)
    mesh = np.meshgrid(*axes, indexing="ij")
    values = np.abs(evaluate_grid(g, mesh))
    index = np.unravel_index(int(np.argmax(values)), values.shape)
    if values[index] < float(bound):
        return None
    return tuple(float(axes[k][i]) for k, i in enumerate(index))


@dataclass(frozen=True)
class BoundCheck:
    """How a bound s_i was accepted: by the coefficient sum, or by sampling only."""

    index: int
    bound: Fraction
    coefficient_sum: Fraction
    method: str


@dataclass(frozen=True)
class LiftedSet:
    """The fibered presentation A′ of a set A.

    Variables are x_1..x_n followed by y_0 (only when A has an equation) and
    y_1..y_q. The equations y_i − g_i(x) = 0 and the conditions y_0 = 0,
    y_i > 0 are kept apart; `presentation` folds them into one H-basic set.
    """

    source: HBasicSet
    bounds: tuple[Fraction, ...]
    equations: tuple[Series, ...]
    presentation: HBasicSet
    checks: tuple[BoundCheck, ...]

    @property
    def has_y0(self) -> bool:
        """True when A had an equation and y_0 was added."""
        return self.source.eq is not None

    @property
    def nvars(self) -> int:
        """The dimension n + q (+ 1 when A has an equation)."""
        return self.presentation.nvars

    def lift_point(self, x: Sequence[Any]) -> list[Any]:
        """(x, g_0(x), …, g_q(x)), the unique point of A′ over x."""
        return list(x) + [evaluate(g, list(x)) for g in _lifted_series(self.source)]

    def project(self, point: Sequence[Any]) -> list[Any]:
        """The x block of a point of A′."""
        return list(point[: self.source.nvars])


def _lifted_series(a: HBasicSet) -> list[Series]:
    return ([a.eq] if a.eq is not None else []) + list(a.ineqs)


def lift_graphs(a: HBasicSet, bounds: Sequence[Fraction], grid: int | None = None) -> LiftedSet:
    """Lift A to {(x, y) : y_i = g_i(x), y_0 = 0, y_i > 0} on Δ_{(r, s)}.

    A bound is accepted outright when it is at least the coefficient sum of
    g_i on Δ_r. Otherwise |g_i| is sampled on the grid: a cell centre where
    it reaches the bound is a witness, and without one the bound is accepted
    with a warning.

    Args:
        a: The set
        bounds: One positive bound per lifted series, s_0 first when A has an equation
        grid: Sampling grid for bounds below the coefficient sum
    Returns:
        The lifted set
    Raises:
        BoundTooSmallError: When a sampled point shows |g_i| ≥ s_i
    """
    lifted = _lifted_series(a)
    bounds = tuple(Fraction(s) for s in bounds)
    if len(bounds) != len(lifted):
        raise HSetError(f"{len(bounds)} bound(s) for {len(lifted)} lifted series")
    if any(s <= 0 for s in bounds):
        raise HSetError("lifting bounds must be positive")
    grid = grid or settings.MONO_FORGE_GRID

    checks = []
    for index, (g, s) in enumerate(zip(lifted, bounds, strict=True)):
        total = coefficient_sum_bound(g, a.polyradius)
        if g.exact and s >= total:
            checks.append(BoundCheck(index, s, total, "coefficient-sum"))
            continue
        witness = sampled_witness(g, a, s, grid)
        if witness is not None:
            raise BoundTooSmallError(
                f"|g_{index}| reaches the bound {s} on the polydisk",
                index=index,
                bound=str(s),
                witness=list(witness),
            )
        logger.warning(f"bound {s} for g_{index} accepted on a grid of {grid}, the coefficient sum is {total}")
        checks.append(BoundCheck(index, s, total, "sampled"))

    n, k = a.nvars, len(lifted)
    total_vars = n + k
    ys = [Series.variable(total_vars, n + 1 + i) for i in range(k)]
    equations = tuple(ys[i] - embed(g, total_vars) for i, g in enumerate(lifted))
    eq = sum((e * e for e in equations), Series.zero(total_vars))
    first_ineq = 0
    if a.eq is not None:
        eq = eq + ys[0] * ys[0]
        first_ineq = 1
    presentation = HBasicSet(a.polyradius + bounds, eq, tuple(ys[first_ineq:]))
    logger.info(f"lifted a set in {n} variables to {total_vars} variables")
    return LiftedSet(a, bounds, equations, presentation, tuple(checks))
