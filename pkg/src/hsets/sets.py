"""Sub-quadrants, H-basic sets and charts."""
from __future__ import annotations

import logging
import random
from collections.abc import Sequence
from dataclasses import dataclass
from dataclasses import field
from fractions import Fraction
from typing import Any

import numpy as np
from django.db import models
from series.core import Series
from series.core import evaluate
from series.numeric import evaluate_grid
from transforms.elementary import TransformPath

from .errors import HSetError

logger = logging.getLogger("monoforge")


class FactorKind(models.TextChoices):
    """The three kinds of sub-quadrant factor."""

    ZERO = ("zero", "{0}")
    POS = ("pos", "(0, r)")
    NEG = ("neg", "(−r, 0)")


class Sign(models.IntegerChoices):
    """A sign, as used by sign_on_quadrant."""

    NEG = (-1, "−")
    ZERO = (0, "0")
    POS = (1, "+")


SIGN_SYMBOLS = {FactorKind.ZERO: "0", FactorKind.POS: "+", FactorKind.NEG: "−"}


@dataclass(frozen=True)
class QuadrantFactor:
    """One factor {0}, (0, r) or (−r, 0); a missing radius means sufficiently small."""

    kind: FactorKind
    radius: Fraction | None = None

    def __post_init__(self) -> None:
        """Radii are positive, and the zero factor has none."""
        if self.kind == FactorKind.ZERO:
            object.__setattr__(self, "radius", None)
        elif self.radius is not None:
            object.__setattr__(self, "radius", Fraction(self.radius))
            if self.radius <= 0:
                raise HSetError(f"quadrant radius must be positive, got {self.radius}")

    @property
    def sign(self) -> Sign:
        """The sign of every point of the factor."""
        return {FactorKind.ZERO: Sign.ZERO, FactorKind.POS: Sign.POS, FactorKind.NEG: Sign.NEG}[self.kind]

    def contains(self, value: Any) -> bool:  # noqa: ANN401
        """Exact membership of a coordinate."""
        if self.kind == FactorKind.ZERO:
            return bool(value == 0)
        if self.radius is None:
            raise HSetError("membership needs a concrete radius")
        if self.kind == FactorKind.POS:
            return bool(0 < value < self.radius)
        return bool(-self.radius < value < 0)


@dataclass(frozen=True)
class SubQuadrant:
    """A product of factors {0}, (0, r_i) and (−r_i, 0)."""

    factors: tuple[QuadrantFactor, ...]

    @classmethod
    def from_signs(cls, signs: Sequence[int], radius: Fraction | None = None) -> SubQuadrant:
        """Build a quadrant from a sign pattern with one shared radius."""
        kinds = {-1: FactorKind.NEG, 0: FactorKind.ZERO, 1: FactorKind.POS}
        return cls(tuple(QuadrantFactor(kinds[int(s)], radius) for s in signs))

    @classmethod
    def around(cls, point: Sequence[Any]) -> SubQuadrant:
        """The quadrant of a point, with radii twice its coordinates."""
        factors = []
        for value in point:
            if value == 0:
                factors.append(QuadrantFactor(FactorKind.ZERO))
                continue
            radius = Fraction(value) if isinstance(value, int | Fraction) else Fraction(float(value))
            radius = 2 * abs(radius)
            factors.append(QuadrantFactor(FactorKind.POS if value > 0 else FactorKind.NEG, radius))
        return cls(tuple(factors))

    def __len__(self) -> int:
        """The number of coordinates."""
        return len(self.factors)

    @property
    def signs(self) -> tuple[Sign, ...]:
        """The sign pattern."""
        return tuple(f.sign for f in self.factors)

    @property
    def is_open(self) -> bool:
        """True when no factor is {0}."""
        return all(f.kind != FactorKind.ZERO for f in self.factors)

    def with_radius(self, radius: Fraction) -> SubQuadrant:
        """The same sign pattern with every radius set to radius."""
        return SubQuadrant.from_signs([int(s) for s in self.signs], radius)

    def scaled(self, factor: Fraction) -> SubQuadrant:
        """Every radius multiplied by factor."""
        return SubQuadrant(
            tuple(QuadrantFactor(f.kind, None if f.radius is None else f.radius * factor) for f in self.factors)
        )

    def contains(self, point: Sequence[Any]) -> bool:
        """Exact membership of a point."""
        if len(point) != len(self):
            raise HSetError(f"point has {len(point)} coordinates, quadrant has {len(self)}")
        return all(f.contains(v) for f, v in zip(self.factors, point, strict=True))

    def sample(self, rng: random.Random, count: int, denominator: int = 1024) -> list[list[Fraction]]:
        """Random rational points strictly inside the quadrant."""
        points = []
        for _ in range(count):
            point = []
            for f in self.factors:
                if f.kind == FactorKind.ZERO:
                    point.append(Fraction(0))
                    continue
                if f.radius is None:
                    raise HSetError("sampling needs a concrete radius")
                value = f.radius * Fraction(rng.randint(1, denominator - 1), denominator)
                point.append(value if f.kind == FactorKind.POS else -value)
            points.append(point)
        return points

    def describe(self) -> str:
        """Short human form such as (+, −, 0)."""
        return "(" + ", ".join(SIGN_SYMBOLS[f.kind] for f in self.factors) + ")"


@dataclass(frozen=True)
class HBasicSet:
    """{x ∈ Δ_r : g_0(x) = 0, g_1(x) > 0, …, g_q(x) > 0}.

    eq is None when the set has no equation; an explicit zero series is kept,
    since lifting adds the variable y_0 exactly when an equation is given.
    """

    polyradius: tuple[Fraction, ...]
    eq: Series | None = None
    ineqs: tuple[Series, ...] = ()

    def __post_init__(self) -> None:
        """Every series lives in as many variables as the polydisk has radii."""
        object.__setattr__(self, "polyradius", tuple(Fraction(r) for r in self.polyradius))
        object.__setattr__(self, "ineqs", tuple(self.ineqs))
        if any(r <= 0 for r in self.polyradius):
            raise HSetError("polyradius entries must be positive")
        for g in self.defining_series():
            if g.nvars != self.nvars:
                raise HSetError(f"series in {g.nvars} variables on a {self.nvars} dimensional polydisk")

    @property
    def nvars(self) -> int:
        """The ambient dimension."""
        return len(self.polyradius)

    def equation(self) -> Series:
        """g_0, the zero series when the set has no equation."""
        return self.eq if self.eq is not None else Series.zero(self.nvars)

    def defining_series(self) -> list[Series]:
        """g_0, g_1, …, g_q."""
        return [self.equation(), *self.ineqs]

    def in_polydisk(self, point: Sequence[Any]) -> bool:
        """Strict membership in Δ_r."""
        return all(abs(v) < r for v, r in zip(point, self.polyradius, strict=True))

    def contains(self, point: Sequence[Any]) -> bool:
        """Membership, exact for rational points."""
        if not self.in_polydisk(point):
            return False
        if self.eq is not None and evaluate(self.eq, list(point)) != 0:
            return False
        return all(evaluate(g, list(point)) > 0 for g in self.ineqs)

    def shrink(self, delta: Fraction) -> HBasicSet:
        """The same conditions on the cube of half side delta, intersected with Δ_r."""
        radius = tuple(min(r, Fraction(delta)) for r in self.polyradius)
        return HBasicSet(radius, self.eq, self.ineqs)

    def grid_axes(self, grid: int) -> list[np.ndarray]:
        """Cell centres of the grid with spacing 1/grid covering Δ_r."""
        step = 1.0 / grid
        return [np.arange(-float(r) + step / 2, float(r), step) for r in self.polyradius]

    def membership_mask(self, grid: int, tolerance: float = 1e-12) -> np.ndarray:
        """The boolean membership array on the cell centre grid, equations within tolerance."""
        axes = self.grid_axes(grid)
        mesh = np.meshgrid(*axes, indexing="ij")
        mask = np.ones(mesh[0].shape, dtype=bool)
        if self.eq is not None:
            mask &= np.abs(evaluate_grid(self.eq, mesh)) <= tolerance
        for g in self.ineqs:
            mask &= evaluate_grid(g, mesh) > 0
        return mask


@dataclass(frozen=True)
class Chart:
    """A pair (Q, ρ): ρ restricted to Q maps diffeomorphically into the set."""

    quadrant: SubQuadrant
    path: TransformPath
    leaf_signs: tuple[Sign, ...] = field(default=())

    def __post_init__(self) -> None:
        """The path acts on as many variables as the quadrant has."""
        self.path.validate(len(self.quadrant))

    def describe(self) -> str:
        """Short human form."""
        return f"{self.quadrant.describe()} via {self.path.describe()}"
