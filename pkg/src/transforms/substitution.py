"""Action of elementary transforms and paths on series, points and monomial divisors."""
import logging
from collections.abc import Iterable
from collections.abc import Sequence
from typing import Any

from series.core import Exponent
from series.core import Series
from series.core import compose
from series.core import componentwise_min

from .elementary import BlowUp
from .elementary import ElementaryTransform
from .elementary import Ramification
from .elementary import Shear
from .elementary import TransformPath
from .elementary import Tschirnhausen

logger = logging.getLogger("monoforge")


def apply(nu: ElementaryTransform, f: Series) -> Series:
    """Return F ∘ ν by substituting the defining formulas of ν into F."""
    return compose(f, nu.images(f.nvars))


def critical_variable(nu: ElementaryTransform) -> int | None:
    """The critical variable of a blow-up chart, None for the other kinds."""
    return nu.critical_variable()


def star_apply(nu: ElementaryTransform, f: Series) -> Series:
    """Return ν*(F): F ∘ ν, multiplied by the critical variable when ν has one."""
    pulled = apply(nu, f)
    j = nu.critical_variable()
    if j is None:
        return pulled
    return Series.variable(f.nvars, j) * pulled


def compose_path(path: TransformPath | Sequence[ElementaryTransform], f: Series) -> Series:
    """Return F ∘ ν_1 ∘ ⋯ ∘ ν_k, folding the steps in order."""
    for nu in path:
        f = apply(nu, f)
    return f


def evaluate_path_at(path: TransformPath | Sequence[ElementaryTransform], p: Sequence[Any]) -> list[Any]:
    """The image ρ(p) = ν_1(ν_2(⋯ν_k(p))) of a point under the composed map."""
    q = list(p)
    for nu in reversed(list(path)):
        nu.validate(len(q))
        q = nu.map_point(q)
    return q


def divisor_image(nu: ElementaryTransform, exp: Sequence[int]) -> Exponent:
    """An exponent whose monomial divides X^exp ∘ ν.

    Blow-ups and ramifications send monomials to monomials times units. A
    shear or a translation leaves no monomial factor in the variables it moves.
    """
    out = list(exp)
    if isinstance(nu, BlowUp):
        out[nu.j - 1] += out[nu.i - 1]
        if nu.lam != 0:
            out[nu.i - 1] = 0
    elif isinstance(nu, Ramification):
        out[nu.i - 1] *= nu.d
    elif isinstance(nu, Shear):
        for k, ck in enumerate(nu.c):
            if ck:
                out[k] = 0
    elif isinstance(nu, Tschirnhausen) and not (nu.h.exact and nu.h.is_zero()):
        out[nu.i - 1] = 0
    return tuple(out)


def path_divisor(path: TransformPath | Sequence[ElementaryTransform], exponents: Iterable[Sequence[int]]) -> Exponent:
    """A monomial dividing G ∘ ρ for every germ G = Σ X^e·G_e with e running over exponents.

    Each exponent is carried through the steps on its own and the minimum is
    taken at the end, which keeps the factors the terms acquire in common.
    """
    carried = []
    for exp in exponents:
        image = tuple(exp)
        for nu in path:
            image = divisor_image(nu, image)
        carried.append(image)
    return componentwise_min(carried)
