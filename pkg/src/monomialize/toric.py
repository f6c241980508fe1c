"""Toric blow-ups on exponent vectors: making tuples pairwise comparable."""
import logging
from collections.abc import Sequence
from fractions import Fraction

from transforms.elementary import BlowUp
from transforms.elementary import TransformPath

from .errors import DepthExceededError
from .errors import NonIntegerExponentError

logger = logging.getLogger("monoforge")

RationalExponent = tuple[Fraction, ...]


def leq(a: Sequence[Fraction], b: Sequence[Fraction]) -> bool:
    """Componentwise a ≤ b."""
    return all(x <= y for x, y in zip(a, b, strict=True))


def comparable(a: Sequence[Fraction], b: Sequence[Fraction]) -> bool:
    """True when a ≤ b or b ≤ a."""
    return leq(a, b) or leq(b, a)


def _check_integral(tuples: Sequence[Sequence[Fraction]]) -> None:
    lengths = {len(t) for t in tuples}
    if len(lengths) > 1:
        raise NonIntegerExponentError("exponent tuples have different lengths", lengths=sorted(lengths))
    for t in tuples:
        if any(Fraction(x).denominator != 1 for x in t):
            raise NonIntegerExponentError(f"exponent tuple {[str(x) for x in t]} is not integral")


def next_toric_blowup(tuples: Sequence[Sequence[Fraction]]) -> tuple[int, int] | None:
    """The blow-up family (i, j) that next reduces an incomparable pair, None when all pairs compare.

    For the first incomparable pair with difference δ, let a be the smallest
    positive entry of δ (at index p) and b the smallest magnitude among the
    negative entries (at index q). The family is π_{p,q} when a < b and π_{q,p}
    otherwise, so that its λ = 0 chart is one Euclid step on (a, b).
    """
    for first in range(len(tuples)):
        for second in range(first + 1, len(tuples)):
            a_t, b_t = tuples[first], tuples[second]
            if comparable(a_t, b_t):
                continue
            delta = [Fraction(x) - Fraction(y) for x, y in zip(a_t, b_t, strict=True)]
            positive = min((d, k) for k, d in enumerate(delta) if d > 0)
            negative = min((-d, k) for k, d in enumerate(delta) if d < 0)
            a, p = positive
            b, q = negative
            return (p + 1, q + 1) if a < b else (q + 1, p + 1)
    return None


def blow_up_exponent(exp: Sequence[Fraction], nu: BlowUp) -> RationalExponent:
    """The exponent of X^exp after the λ = 0 chart π_{i,j}^0, which sends X_i to X_j·X_i."""
    out = [Fraction(x) for x in exp]
    out[nu.j - 1] += out[nu.i - 1]
    return tuple(out)


def sort_comparable(tuples: Sequence[Sequence[Fraction]]) -> list[RationalExponent]:
    """Sort pairwise comparable tuples ascending."""
    return sorted((tuple(Fraction(x) for x in t) for t in tuples), key=lambda t: (sum(t), t))


def linearize_exponents(
    tuples: Sequence[Sequence[Fraction]],
    max_steps: int = 256,
) -> tuple[TransformPath, list[RationalExponent]]:
    """Find λ = 0 blow-ups after which the exponent tuples are pairwise comparable.

    Every step lowers the positive or the negative part of the difference of
    one incomparable pair. For two integral tuples this is Euclid and stops;
    max_steps bounds the general case.

    Args:
        tuples: Exponent tuples of one common length, with integer entries
        max_steps: Bound on the number of blow-ups
    Returns:
        The blow-up path, and the transformed tuples in ascending order
    Raises:
        NonIntegerExponentError: When an entry is not an integer
        DepthExceededError: When more than max_steps blow-ups are needed
    """
    _check_integral(tuples)
    current = [tuple(Fraction(x) for x in t) for t in tuples]
    path = TransformPath()
    while (family := next_toric_blowup(current)) is not None:
        nu = BlowUp(family[0], family[1], Fraction(0))
        if len(path) >= max_steps:
            raise DepthExceededError(f"toric linearization needs more than {max_steps} steps", path=path.describe())
        path = path.then(nu)
        current = [blow_up_exponent(t, nu) for t in current]
        logger.debug(f"toric step {nu.describe()}: {[[str(x) for x in t] for t in current]}")
    return path, sort_comparable(current)
