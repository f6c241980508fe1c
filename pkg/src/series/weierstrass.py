"""Regularity in the last variable, the coefficient split and the formal root."""
import logging
import math
from fractions import Fraction

from .core import Series
from .core import compose
from .core import derivative
from .core import truncate
from .errors import RegularityError
from .errors import SeriesError
from .normality import unit_inverse

logger = logging.getLogger("monoforge")


def regularity_order(f: Series) -> int | None:
    """The least d such that X_n^d has a nonzero coefficient, None if there is none up to trunc."""
    orders = [exp[-1] for exp in f.support if f.nvars and not any(exp[:-1])]
    return min(orders) if orders else None


def _require_order(f: Series, d: int) -> None:
    found = regularity_order(f)
    if found != d:
        raise RegularityError(f"series is regular of order {found}, not {d}", expected=d, found=found)


def x_hat_coefficients(f: Series) -> dict[int, Series]:
    """Split f = Σ c_k(X̂)·X_n^k and return {k: c_k} with each c_k in n−1 variables.

    The coefficient of X_n^k is known up to total degree trunc − k.
    """
    groups: dict[int, dict[tuple[int, ...], Fraction]] = {}
    for exp, coef in f.items():
        groups.setdefault(exp[-1], {})[exp[:-1]] = coef
    return {
        k: Series(f.nvars - 1, terms, None if f.trunc is None else f.trunc - k)
        for k, terms in sorted(groups.items())
    }


def weierstrass_coeffs(f: Series, d: int) -> tuple[Series, list[Series]]:
    """Write F = U·X_n^d + Σ F_i·X_n^{d−i} with U a unit and each F_i free of X_n.

    Args:
        f: A series regular of order d in the last variable
        d: The regularity order
    Returns:
        The unit U in n variables and the list F_1..F_d in n−1 variables
    Raises:
        RegularityError: When f is not regular of order d
    """
    _require_order(f, d)
    n = f.nvars
    coeffs = x_hat_coefficients(f)
    unit = Series(
        n,
        [(exp[:-1] + (exp[-1] - d,), coef) for exp, coef in f.items() if exp[-1] >= d],
        None if f.trunc is None else f.trunc - d,
    )
    lower = []
    for i in range(1, d + 1):
        k = d - i
        trunc = None if f.trunc is None else f.trunc - k
        lower.append(coeffs.get(k, Series.zero(n - 1, trunc)))
    logger.debug(f"weierstrass split at order {d}: {[c.pretty() for c in lower]}")
    return unit, lower


def weierstrass_reassemble(unit: Series, lower: list[Series]) -> Series:
    """Rebuild U·X_n^d + Σ F_i·X_n^{d−i} by shifting exponents."""
    d = len(lower)
    terms = [(exp[:-1] + (exp[-1] + d,), coef) for exp, coef in unit.items()]
    truncs = [None if unit.trunc is None else unit.trunc + d]
    for i, fi in enumerate(lower, start=1):
        terms.extend((exp + (d - i,), coef) for exp, coef in fi.items())
        truncs.append(None if fi.trunc is None else fi.trunc + d - i)
    finite = [t for t in truncs if t is not None]
    return Series(unit.nvars, terms, min(finite) if finite else None)


def qk_polynomials(f: Series, k: int) -> Series:
    """The exact polynomial Q_k(Y) = Σ_{|α|=k} a_α·Y^α̂ in n−1 variables.

    Raises:
        SeriesError: When k exceeds the truncation bound
    """
    if f.trunc is not None and k > f.trunc:
        raise SeriesError(f"degree {k} is above the truncation bound {f.trunc}", k=k, trunc=f.trunc)
    return Series(f.nvars - 1, [(exp[:-1], coef) for exp, coef in f.items() if sum(exp) == k])


def substitute_last(g: Series, b: Series) -> Series:
    """Return g(X̂, b(X̂)) as a series in n−1 variables."""
    m = g.nvars - 1
    return compose(g, [*(Series.variable(m, i) for i in range(1, m + 1)), b])


def formal_root_in_xn(f: Series, d: int, n: int) -> Series:
    """Solve ∂^{d−1}F/∂X_n^{d−1}(X̂, b(X̂)) = 0 for b with b(0) = 0.

    Newton iteration doubles the number of correct degrees each step,
    starting from b = 0. When F is exact and the truncated root solves the
    equation identically as a polynomial, the root is returned exact.

    Args:
        f: A series regular of order d ≥ 1 in the last variable
        d: The regularity order
        n: The total degree bound for the root
    Returns:
        The root b as a series in the first n−1 variables
    Raises:
        RegularityError: When f is not regular of order d, or d is zero
    """
    if d < 1:
        raise RegularityError("formal root needs regularity order at least 1", expected=d)
    _require_order(f, d)
    last = f.nvars
    g = derivative(f, last, d - 1)
    g_prime = derivative(g, last)
    bound = n if g.trunc is None else min(n, g.trunc)
    root = Series.zero(last - 1, bound)
    for step in range(math.ceil(math.log2(bound + 1)) + 1):
        residual = substitute_last(g, root)
        if residual.is_zero():
            break
        slope = substitute_last(g_prime, root)
        root = truncate(root - residual * unit_inverse(slope, bound), bound)
        logger.debug(f"newton step {step}: root {root.pretty()}")
    if f.exact:
        degree = root.degree()
        if degree is None or degree < bound:
            candidate = root.with_trunc(None)
            if substitute_last(g, candidate).is_zero():
                logger.debug(f"root {candidate.pretty()} is an exact polynomial")
                return candidate
    return root
