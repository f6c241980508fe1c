"""The four elementary transformations as immutable values.

Each transform knows the images of the old coordinates as series in the new
coordinates, how it maps a point, and its critical variable. Indices are
1-based.
"""
from __future__ import annotations

import logging
from collections.abc import Iterator
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import Any
from typing import Literal
from typing import TypeAlias

from series.core import Series
from series.core import embed
from series.core import evaluate

from .errors import InvalidTransformError

logger = logging.getLogger("monoforge")

INF: Literal["inf"] = "inf"
Lambda: TypeAlias = Fraction | Literal["inf"]


def parse_lambda(value: str | int | Fraction) -> Lambda:
    """Parse a blow-up parameter, a rational or "inf"."""
    if value == INF:
        return INF
    return Fraction(value)


def format_lambda(value: Lambda) -> str:
    """Format a blow-up parameter for output."""
    return INF if value == INF else str(value)


def lambda_sort_key(value: Lambda) -> tuple[int, Fraction]:
    """Rationals ascending, infinity last."""
    if value == INF:
        return (1, Fraction(0))
    return (0, Fraction(value))


@dataclass(frozen=True)
class BlowUp:
    """The chart x_i = x_j′(λ + x_i′) of the blow-up along {x_i = x_j = 0}.

    λ = ∞ never reaches this class: BlowUp.of rewrites it as π_{j,i} at λ = 0.
    """

    i: int
    j: int
    lam: Fraction = Fraction(0)

    kind = "blowup"

    def __post_init__(self) -> None:
        """Validate the indices."""
        if self.i == self.j:
            raise InvalidTransformError(f"blow-up needs two distinct variables, got i = j = {self.i}")
        if min(self.i, self.j) < 1:
            raise InvalidTransformError("variable indices start at 1")
        if self.lam == INF:
            raise InvalidTransformError("use BlowUp.of for λ = ∞")
        object.__setattr__(self, "lam", Fraction(self.lam))

    @classmethod
    def of(cls, i: int, j: int, lam: Lambda) -> BlowUp:
        """Build the chart π_{i,j}^λ, normalizing λ = ∞ to π_{j,i}^0."""
        if lam == INF:
            return cls(j, i, Fraction(0))
        return cls(i, j, Fraction(lam))

    @property
    def max_index(self) -> int:
        """The largest variable index involved."""
        return max(self.i, self.j)

    def critical_variable(self) -> int | None:
        """The variable X_j that the pulled back series gets multiplied by."""
        return self.j

    def images(self, nvars: int) -> list[Series]:
        """The old coordinates as series in the new ones."""
        self.validate(nvars)
        images = [Series.variable(nvars, k) for k in range(1, nvars + 1)]
        xj = Series.variable(nvars, self.j)
        images[self.i - 1] = xj * (Series.variable(nvars, self.i) + self.lam)
        return images

    def map_point(self, p: Sequence[Any]) -> list[Any]:
        """The image of a point."""
        q = list(p)
        q[self.i - 1] = p[self.j - 1] * (self.lam + p[self.i - 1])
        return q

    def validate(self, nvars: int) -> None:
        """Check the indices against a variable count."""
        if self.max_index > nvars:
            raise InvalidTransformError(f"blow-up π_{self.i},{self.j} needs at least {self.max_index} variables")

    def describe(self) -> str:
        """Short human form."""
        return f"π[{self.i},{self.j}]^{self.lam}"


@dataclass(frozen=True)
class Tschirnhausen:
    """The translation x_i = x_i′ + h(x_1′, …, x_{i−1}′) where i = h.nvars + 1."""

    h: Series

    kind = "tschirnhausen"

    def __post_init__(self) -> None:
        """h vanishes at the origin."""
        if self.h.constant_term() != 0:
            raise InvalidTransformError("Tschirnhausen translation needs h(0) = 0", h=self.h.pretty())

    @property
    def i(self) -> int:
        """The translated variable."""
        return self.h.nvars + 1

    @property
    def max_index(self) -> int:
        """The largest variable index involved."""
        return self.i

    def critical_variable(self) -> int | None:
        """Translations have no critical variable."""
        return None

    def images(self, nvars: int) -> list[Series]:
        """The old coordinates as series in the new ones."""
        self.validate(nvars)
        images = [Series.variable(nvars, k) for k in range(1, nvars + 1)]
        images[self.i - 1] = images[self.i - 1] + embed(self.h, nvars)
        return images

    def map_point(self, p: Sequence[Any]) -> list[Any]:
        """The image of a point, exact when h is a polynomial."""
        q = list(p)
        q[self.i - 1] = p[self.i - 1] + evaluate(self.h, list(p[: self.i - 1]))
        return q

    def validate(self, nvars: int) -> None:
        """Check the translated index against a variable count."""
        if self.i > nvars:
            raise InvalidTransformError(f"translation of X_{self.i} needs at least {self.i} variables")

    def describe(self) -> str:
        """Short human form."""
        return f"τ[{self.i}]({self.h.pretty()})"


@dataclass(frozen=True)
class Shear:
    """The linear change x_k = x_k′ + c_k·x_i′ for k < i."""

    i: int
    c: tuple[Fraction, ...]

    kind = "shear"

    def __post_init__(self) -> None:
        """The coefficient vector has length i − 1."""
        object.__setattr__(self, "c", tuple(Fraction(ck) for ck in self.c))
        if len(self.c) != self.i - 1:
            raise InvalidTransformError(f"shear of X_{self.i} needs {self.i - 1} coefficients, got {len(self.c)}")

    @property
    def max_index(self) -> int:
        """The largest variable index involved."""
        return self.i

    def critical_variable(self) -> int | None:
        """Shears have no critical variable."""
        return None

    def is_identity(self) -> bool:
        """True when every coefficient vanishes."""
        return not any(self.c)

    def images(self, nvars: int) -> list[Series]:
        """The old coordinates as series in the new ones."""
        self.validate(nvars)
        images = [Series.variable(nvars, k) for k in range(1, nvars + 1)]
        xi = Series.variable(nvars, self.i)
        for k, ck in enumerate(self.c):
            if ck:
                images[k] = images[k] + xi.scale(ck)
        return images

    def map_point(self, p: Sequence[Any]) -> list[Any]:
        """The image of a point."""
        q = list(p)
        for k, ck in enumerate(self.c):
            q[k] = p[k] + ck * p[self.i - 1]
        return q

    def validate(self, nvars: int) -> None:
        """Check the sheared index against a variable count."""
        if self.i > nvars:
            raise InvalidTransformError(f"shear of X_{self.i} needs at least {self.i} variables")

    def describe(self) -> str:
        """Short human form."""
        return f"σ[{self.i}]({', '.join(str(ck) for ck in self.c)})"


@dataclass(frozen=True)
class Ramification:
    """The power map x_i = ±x_i′^d."""

    i: int
    d: int
    sign: int = 1

    kind = "ramification"

    def __post_init__(self) -> None:
        """d is at least one and the sign is ±1."""
        if self.d < 1:
            raise InvalidTransformError(f"ramification degree must be at least 1, got {self.d}")
        if self.sign not in (1, -1):
            raise InvalidTransformError(f"ramification sign must be ±1, got {self.sign}")

    @property
    def max_index(self) -> int:
        """The largest variable index involved."""
        return self.i

    def critical_variable(self) -> int | None:
        """Ramifications have no critical variable."""
        return None

    def images(self, nvars: int) -> list[Series]:
        """The old coordinates as series in the new ones."""
        self.validate(nvars)
        images = [Series.variable(nvars, k) for k in range(1, nvars + 1)]
        exp = [0] * nvars
        exp[self.i - 1] = self.d
        images[self.i - 1] = Series.monomial(nvars, exp, self.sign)
        return images

    def map_point(self, p: Sequence[Any]) -> list[Any]:
        """The image of a point."""
        q = list(p)
        q[self.i - 1] = self.sign * p[self.i - 1] ** self.d
        return q

    def validate(self, nvars: int) -> None:
        """Check the ramified index against a variable count."""
        if self.i > nvars:
            raise InvalidTransformError(f"ramification of X_{self.i} needs at least {self.i} variables")

    def describe(self) -> str:
        """Short human form."""
        return f"ρ[{self.i}]^{'+' if self.sign > 0 else '−'}{self.d}"


ElementaryTransform: TypeAlias = BlowUp | Tschirnhausen | Shear | Ramification


@dataclass(frozen=True)
class TransformPath:
    """An admissible transformation ν_1 ∘ ⋯ ∘ ν_k, stored in application order."""

    steps: tuple[ElementaryTransform, ...] = ()

    def __len__(self) -> int:
        """The number of steps."""
        return len(self.steps)

    def __iter__(self) -> Iterator[ElementaryTransform]:
        """Iterate over the steps in order."""
        return iter(self.steps)

    def then(self, nu: ElementaryTransform) -> TransformPath:
        """The path with one more step appended."""
        return TransformPath((*self.steps, nu))

    def suffix(self, start: int) -> TransformPath:
        """The steps from position start onwards."""
        return TransformPath(self.steps[start:])

    def validate(self, nvars: int) -> None:
        """Check that every step fits the variable count."""
        for nu in self.steps:
            nu.validate(nvars)

    def describe(self) -> str:
        """Short human form."""
        return " ∘ ".join(nu.describe() for nu in self.steps) or "id"
