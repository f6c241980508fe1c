"""Signs of normal germs on sub-quadrants."""
import itertools
import logging
from collections.abc import Sequence

from series.core import Series
from series.normality import NormalCertificate
from series.normality import certificate_of

from .errors import HSetError
from .errors import MissingCertificateError
from .sets import FactorKind
from .sets import HBasicSet
from .sets import Sign
from .sets import SubQuadrant

logger = logging.getLogger("monoforge")


def sign_on_quadrant(cert: NormalCertificate, quadrant: SubQuadrant) -> Sign:
    """The sign of X^α·U on a sufficiently small copy of the quadrant.

    Zero when some α_i > 0 sits on a {0} factor, otherwise the sign of the
    unit constant flipped once for every odd α_i on a negative factor.
    """
    if len(cert.alpha) != len(quadrant):
        raise HSetError(f"certificate in {len(cert.alpha)} variables, quadrant in {len(quadrant)}")
    sign = 1 if cert.unit_constant > 0 else -1
    for a, factor in zip(cert.alpha, quadrant.factors, strict=True):
        if a and factor.kind == FactorKind.ZERO:
            return Sign.ZERO
        if factor.kind == FactorKind.NEG and a % 2:
            sign = -sign
    return Sign(sign)


def quadrant_patterns(nvars: int) -> list[SubQuadrant]:
    """All 3^n sub-quadrants with a symbolic radius."""
    return [SubQuadrant.from_signs(signs) for signs in itertools.product((-1, 0, 1), repeat=nvars)]


def certified_membership(
    nvars: int,
    eq: NormalCertificate | None,
    ineqs: Sequence[NormalCertificate],
) -> list[SubQuadrant]:
    """The sub-quadrants where the equation vanishes and every inequality is positive.

    A missing equation certificate stands for g_0 = 0.
    """
    quadrants = []
    for quadrant in quadrant_patterns(nvars):
        if eq is not None and sign_on_quadrant(eq, quadrant) != Sign.ZERO:
            continue
        if all(sign_on_quadrant(cert, quadrant) == Sign.POS for cert in ineqs):
            quadrants.append(quadrant)
    return quadrants


def _require_certificate(g: Series, what: str) -> NormalCertificate:
    cert = certificate_of(g)
    if cert is None:
        raise MissingCertificateError(f"{what} {g.pretty()} is not certified normal")
    return cert


def membership_quadrants(pullback: HBasicSet) -> list[SubQuadrant]:
    """The sub-quadrants near 0 that lie in a set whose defining germs are all normal.

    Raises:
        MissingCertificateError: When a defining series is not certified normal
    """
    eq = None
    if pullback.eq is not None and not pullback.eq.is_zero():
        eq = _require_certificate(pullback.eq, "equation")
    if any(g.is_zero() for g in pullback.ineqs):
        return []
    ineqs = [_require_certificate(g, "inequality") for g in pullback.ineqs]
    quadrants = certified_membership(pullback.nvars, eq, ineqs)
    logger.debug(f"{len(quadrants)} sub-quadrant(s) lie in the set")
    return quadrants
