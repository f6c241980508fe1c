"""Building the admissible tree that *-monomializes a tuple of series.

The recursion runs in stages. A stage owns some target series in the first m
variables and ends as soon as their product is normal, handing the node over
to its continuation. Inside a stage the product is made regular in X_m by a
shear, translated so that its X_m^{d−1} coefficient vanishes, and the
remaining coefficients F_2..F_d are monomialized by an inner stage in m − 1
variables. Ramification and toric blow-ups then order their exponents and a
blow-up family on (X_m, X_k) lowers the termination measure.

A Tschirnhausen edge stands for the exact root of which it stores the jet up
to the working truncation. Below such an edge the stored terms alone cannot
show a product normal, so each stage also keeps monomials known to divide
its product: exact supports carried down the path, and the factorisations
the translations and blow-ups produce.

Blow-up families are lazy: only {0, ∞} and the configured seeds are built
up front, everything else on request through expand_lambda.
"""
from __future__ import annotations

import itertools
import logging
import math
from collections.abc import Callable
from collections.abc import Sequence
from dataclasses import dataclass
from dataclasses import replace
from fractions import Fraction
from functools import partial

from series.core import Exponent
from series.core import Series
from series.core import componentwise_min
from series.core import embed
from series.core import evaluate
from series.core import exponent_leq
from series.core import monomial_quotient
from series.core import product
from series.core import restrict
from series.core import unit_exponent
from series.errors import DimensionMismatchError
from series.normality import Normal
from series.normality import NormalCertificate
from series.normality import NotNormal
from series.normality import UnknownAtTruncation
from series.normality import is_normal
from series.weierstrass import formal_root_in_xn
from series.weierstrass import qk_polynomials
from series.weierstrass import regularity_order
from series.weierstrass import weierstrass_coeffs
from transforms.elementary import BlowUp
from transforms.elementary import Ramification
from transforms.elementary import Shear
from transforms.elementary import Tschirnhausen
from transforms.substitution import compose_path
from transforms.substitution import path_divisor

from .errors import InconclusiveError
from .errors import MeasureError
from .errors import MonomializeError
from .errors import PrecisionExhaustedError
from .toric import leq
from .toric import next_toric_blowup
from .tree import LambdaFamily
from .tree import Leaf
from .tree import TerminationMeasure
from .tree import TreeConfig
from .tree import TreeNode
from .tree import iter_families
from .tree import iter_leaves

logger = logging.getLogger("monoforge")


def _plus(*exps: Sequence[int]) -> Exponent:
    return tuple(sum(column) for column in zip(*exps, strict=True))


def _pad(exp: Sequence[int], n: int) -> Exponent:
    return tuple(exp) + (0,) * (n - len(exp))


def divisor_terms(f: Series) -> tuple[Exponent, ...]:
    """Exponents e with f = Σ X^e·(germ): the support of an exact series, only 0 for a truncated one."""
    if f.exact and not f.is_zero():
        return f.support
    return ((0,) * f.nvars,)


def tracked_divisor(node: TreeNode, index: int) -> Exponent:
    """A monomial known to divide the tracked series at index.

    Targets carry their exact support down from the root, critical variables
    their own exponent down from the blow-up that added them.
    """
    root = node
    while root.parent is not None:
        root = root.parent
    if index < node.target_count:
        return path_divisor(node.path, divisor_terms(root.series_state[index]))
    blowups = [(t, nu.j) for t, nu in enumerate(node.path.steps) if isinstance(nu, BlowUp)]
    t, j = blowups[index - node.target_count]
    return path_divisor(node.path.suffix(t + 1), [unit_exponent(node.nvars, j)])


@dataclass(frozen=True)
class Carried:
    """Series fixed at the node where a stage started, pulled back along the path below it.

    divisors holds, per series, exponents e with the series equal to
    Σ X^e·(germ) at the start; empty means they are read off the series.
    """

    start: int
    series: tuple[Series, ...]
    divisors: tuple[tuple[Exponent, ...], ...] = ()

    def at(self, node: TreeNode) -> tuple[Series, ...]:
        """The images of the carried series at a node below the start."""
        suffix = node.path.suffix(self.start)
        return tuple(compose_path(suffix, s) for s in self.series)

    def divisor_at(self, node: TreeNode) -> Exponent:
        """A monomial known to divide the product of the images at node."""
        suffix = node.path.suffix(self.start)
        terms = self.divisors or tuple(divisor_terms(s) for s in self.series)
        return _plus((0,) * node.nvars, *(path_divisor(suffix, t) for t in terms))


@dataclass(frozen=True)
class Known:
    """Exponents e, fixed at a node, with the stage product there equal to Σ X^e·(germ)."""

    start: int
    terms: tuple[Exponent, ...]

    def at(self, node: TreeNode) -> Exponent:
        """A monomial dividing the stage product at a node below the start."""
        return path_divisor(node.path.suffix(self.start), self.terms)


@dataclass(frozen=True)
class Stage:
    """One level of the recursion, working in the first m variables."""

    m: int
    targets: Carried
    then: Callable[[TreeNode], None]
    trace: tuple[TerminationMeasure, ...] = ()
    baseline: TerminationMeasure | None = None
    known: tuple[Known, ...] = ()


@dataclass(frozen=True)
class Coefficients:
    """The nonzero coefficients F_i of a stage, carried through its inner stage.

    The inner targets start with the F_i, in the order of orders, followed by
    the coordinate variables X_1..X_{m−1}. beta is the monomial X̂^β split
    off the stage product when it is known to divide it, and hidden lists the
    F_i with i ≥ 2 that vanish only up to the truncation.
    """

    d: int
    orders: tuple[int, ...]
    inner: Carried
    beta: Exponent | None = None
    hidden: tuple[int, ...] = ()


def _certify(f: Series, what: str, divisor: Sequence[int] | None = None) -> NormalCertificate | None:
    """The certificate of f, None when it is not normal, raising when its stored terms cannot decide."""
    result = is_normal(f, divisor)
    if isinstance(result, UnknownAtTruncation):
        raise InconclusiveError(
            f"{what} is X^{result.alpha}·unit up to degree {result.trunc}, "
            f"but X^{result.alpha} is not known to divide the terms above it",
            alpha=list(result.alpha),
            trunc=result.trunc,
        )
    if isinstance(result, NotNormal):
        return None
    return result.certificate


def _certify_factor(f: Series, what: str) -> NormalCertificate | None:
    """Certify a factor of a product already shown normal, which makes the factor normal too."""
    if f.is_zero():
        if f.trunc is None:
            raise MonomializeError(f"{what} vanishes identically")
        raise PrecisionExhaustedError(
            f"{what} vanishes up to degree {f.trunc}, a larger trunc may separate its terms",
            trunc=f.trunc,
        )
    return _certify(f, what, componentwise_min(f.support))


def shear_coefficients(q: Series) -> tuple[Fraction, ...]:
    """The smallest integer c with Q(c) ≠ 0, by max norm and then lexicographically.

    A nonzero polynomial of degree k does not vanish on the whole grid
    {−k..k}^(n−1), so the search stops there.
    """
    if q.is_zero():
        raise MonomializeError("shear search on a zero polynomial")
    width = q.nvars
    bound = max(q.degree() or 0, 1)
    for radius in range(bound + 1):
        for c in itertools.product(range(-radius, radius + 1), repeat=width):
            if max((abs(x) for x in c), default=0) != radius:
                continue
            point = [Fraction(x) for x in c]
            if evaluate(q, point) != 0:
                return tuple(point)
    raise MonomializeError("no shear found", q=q.pretty())


def strip_monomial(p: Series) -> tuple[tuple[int, ...], Series]:
    """Divide out the largest monomial in X_1..X_{m−1} dividing p."""
    m = p.nvars
    beta = tuple(min(exp[k] for exp in p.support) for k in range(m - 1)) + (0,)
    if not any(beta):
        return beta, p
    return beta, monomial_quotient(p, beta)


class Monomializer:
    """Runs the recursion for one tree, holding its configuration."""

    def __init__(self, config: TreeConfig) -> None:
        """Keep the configuration used by every stage and every later λ expansion."""
        self.config = config

    def child(self, node: TreeNode, nu: Shear | Tschirnhausen | Ramification) -> TreeNode:
        """Attach the child reached through a non blow-up transform."""
        return node.add_child(nu, max_depth=self.config.max_depth)

    def stage_product(self, node: TreeNode, stage: Stage) -> Series:
        """The product of the stage targets at node, as a series in the first m variables."""
        series = stage.targets.at(node)
        p = product(series, node.nvars)
        if p.is_zero():
            if p.trunc is not None:
                raise PrecisionExhaustedError(
                    f"the stage product in {stage.m} variables vanishes up to degree {p.trunc}, "
                    "a larger trunc may separate its terms",
                    trunc=p.trunc,
                    node=repr(node),
                )
            raise MonomializeError("a stage target vanishes identically", node=repr(node))
        try:
            return restrict(p, stage.m)
        except DimensionMismatchError as e:
            raise MonomializeError(f"stage in {stage.m} variables met a later variable") from e

    def divisor(self, node: TreeNode, stage: Stage) -> Exponent:
        """A monomial in X_1..X_m known to divide the stage product at node."""
        candidates = [stage.targets.divisor_at(node), *(known.at(node) for known in stage.known)]
        return tuple(max(column) for column in zip(*candidates, strict=True))[: stage.m]

    def solve(self, node: TreeNode, stage: Stage) -> None:
        """Drive the stage at node until its product is normal, then continue."""
        p = self.stage_product(node, stage)
        if isinstance(is_normal(p, self.divisor(node, stage)), Normal):
            stage.then(node)
            return
        beta, stripped = strip_monomial(p)
        d = regularity_order(stripped)
        if d == 0:
            raise InconclusiveError(
                f"stage product in {stage.m} variables is X^{beta}·unit up to degree {p.trunc}, "
                f"but X^{beta} is not known to divide the terms above it",
                alpha=list(beta),
                trunc=p.trunc,
            )
        if d is None:
            k = stripped.order() or 0
            c = shear_coefficients(qk_polynomials(stripped, k))
            logger.debug(f"stage {stage.m}: shear by {[str(x) for x in c]} for order {k}")
            self.solve(self.child(node, Shear(stage.m, c)), stage)
            return
        logger.debug(f"stage {stage.m}: regular of order {d} at depth {node.depth}")
        self.translate(node, stage, stripped, d)

    def translate(self, node: TreeNode, stage: Stage, stripped: Series, d: int) -> None:
        """Apply the Tschirnhausen translation that kills the X_m^{d−1} coefficient."""
        root = formal_root_in_xn(stripped, d, self.config.trunc)
        if not (root.exact and root.is_zero()):
            logger.debug(f"stage {stage.m}: Tschirnhausen root {root.pretty()}")
            node = self.child(node, Tschirnhausen(root))
        self.after_root(node, stage, d)

    def after_root(self, node: TreeNode, stage: Stage, d: int) -> None:
        """Split off the coefficients F_i and hand them to the inner stage.

        With d = 1 the translation leaves X̂^β·X_m·U, which is normal as soon
        as X̂^β is known to divide the product.
        """
        what = f"stage product in {stage.m} variables"
        p = self.stage_product(node, stage)
        kappa = self.divisor(node, stage)
        if isinstance(is_normal(p, kappa), Normal):
            stage.then(node)
            return
        beta, stripped = strip_monomial(p)
        proven = exponent_leq(beta, kappa)
        if d == 1:
            split = _plus(beta, unit_exponent(stage.m, stage.m))
            if _certify(p, what, split if proven else None) is None:
                raise MonomializeError(f"{what} is not normal after its translation", node=repr(node))
            stage.then(node)
            return
        _, lower = weierstrass_coeffs(stripped, d)
        orders = tuple(i for i, fi in enumerate(lower, start=1) if not fi.is_zero())
        if not orders:
            raise PrecisionExhaustedError(
                f"coefficients F_2..F_{d} of the {what} vanish up to degree {p.trunc}, "
                "a larger trunc may separate them",
                trunc=p.trunc,
                node=repr(node),
            )
        hidden = tuple(i for i, fi in enumerate(lower, start=1) if i > 1 and fi.is_zero() and not fi.exact)
        n = node.nvars
        coefficients = [embed(lower[i - 1], n) for i in orders]
        coordinates = [Series.variable(n, k) for k in range(1, stage.m)]
        carried = Coefficients(
            d,
            orders,
            Carried(node.depth, (*coefficients, *coordinates)),
            beta=_pad(beta, n) if proven else None,
            hidden=hidden,
        )
        logger.debug(f"stage {stage.m}: coefficients {[lower[i - 1].pretty() for i in orders]}")
        inner = Stage(stage.m - 1, carried.inner, lambda reached: self.ramify(reached, stage, carried))
        self.solve(node, inner)

    def exponents(self, node: TreeNode, stage: Stage, carried: Coefficients) -> list[tuple[int, tuple[int, ...]]]:
        """The pairs (i, α_i) with F_i = X̂^{α_i}·unit at node."""
        values = carried.inner.at(node)
        pairs = []
        for i, fi in zip(carried.orders, values, strict=False):
            cert = _certify_factor(restrict(fi, stage.m - 1), f"coefficient F_{i}")
            if cert is None:
                raise MonomializeError(f"coefficient F_{i} is not normal after its inner stage")
            pairs.append((i, cert.alpha))
        return pairs

    def ramify(self, node: TreeNode, stage: Stage, carried: Coefficients) -> None:
        """Ramify by d! every X_k whose exponents are not divisible by their orders."""
        pairs = self.exponents(node, stage, carried)
        needed = [k for k in range(1, stage.m) if any(alpha[k - 1] % i for i, alpha in pairs)]
        if needed:
            logger.debug(f"stage {stage.m}: ramifying {needed} by {carried.d}!")
            stage = replace(stage, baseline=None)
        self._ramify_chain(node, stage, carried, needed)

    def _ramify_chain(self, node: TreeNode, stage: Stage, carried: Coefficients, needed: Sequence[int]) -> None:
        if not needed:
            self.linearize(node, stage, carried)
            return
        degree = math.factorial(carried.d)
        for sign in (1, -1):
            self._ramify_chain(self.child(node, Ramification(needed[0], degree, sign)), stage, carried, needed[1:])

    def linearize(self, node: TreeNode, stage: Stage, carried: Coefficients) -> None:
        """Blow up toric families until the tuples α_i/i are linearly ordered."""
        pairs = self.exponents(node, stage, carried)
        tuples = [tuple(Fraction(a, i) for a in alpha) for i, alpha in pairs]
        family = next_toric_blowup(tuples)
        if family is None:
            self.blow_up(node, stage, carried, pairs)
            return
        logger.debug(f"stage {stage.m}: toric family π[{family[0]},{family[1]}]")
        reset = replace(stage, baseline=None)
        self.open_family(node, *family, lambda child: self.linearize(child, reset, carried))

    def with_split(
        self,
        node: TreeNode,
        stage: Stage,
        carried: Coefficients,
        pairs: list[tuple[int, tuple[int, ...]]],
    ) -> Stage:
        """Record that the stage product at node is X̂^β·(U·X_m^d + Σ X̂^{α_i}·u_i·X_m^{d−i})."""
        if carried.beta is None:
            return stage
        n = node.nvars
        shift = path_divisor(node.path.suffix(carried.inner.start), [carried.beta])
        last = unit_exponent(n, stage.m)
        terms = [_plus(shift, [carried.d * e for e in last])]
        terms.extend(_plus(shift, _pad(alpha, n), [(carried.d - i) * e for e in last]) for i, alpha in pairs)
        terms.extend(_plus(shift, [(carried.d - i) * e for e in last]) for i in carried.hidden)
        return replace(stage, known=(*stage.known, Known(node.depth, tuple(terms))))

    def blow_up(
        self,
        node: TreeNode,
        stage: Stage,
        carried: Coefficients,
        pairs: list[tuple[int, tuple[int, ...]]],
    ) -> None:
        """Blow up (X_m, X_k) where X_k divides the smallest X̂^{α_l/l}."""
        ratios = {i: tuple(Fraction(a, i) for a in alpha) for i, alpha in pairs}
        l_order = next(i for i, r in ratios.items() if all(leq(r, other) for other in ratios.values()))
        alpha = dict(pairs)[l_order]
        split = self.with_split(node, stage, carried, pairs)
        if not any(alpha):
            logger.debug(f"stage {stage.m}: F_{l_order} is a unit, regularity order drops")
            self.solve(node, split)
            return
        k = next(idx for idx, a in enumerate(alpha, start=1) if a)
        measure = TerminationMeasure(stage.m, carried.d, ratios[l_order])
        if self.config.check_measure and stage.baseline is not None and not measure < stage.baseline:
            raise MeasureError(
                f"termination measure {measure.describe()} does not drop below {stage.baseline.describe()}",
                trace=[t.describe() for t in stage.trace],
            )
        node.measure = measure
        below = replace(split, trace=(*stage.trace, measure), baseline=measure)
        logger.debug(f"stage {stage.m}: blow-up family π[{stage.m},{k}] with measure {measure.describe()}")
        self.open_family(node, stage.m, k, lambda child: self.solve(child, below))

    def open_family(self, node: TreeNode, i: int, j: int, build: Callable[[TreeNode], None]) -> None:
        """Attach a λ-family at node and expand its initial λ values."""
        family = LambdaFamily(node, i, j, build, max_depth=self.config.max_depth)
        node.children = family
        for lam in self.config.initial_lambdas():
            family.expand(lam)

    def finish(self, node: TreeNode, factors: int) -> None:
        """Certify every tracked series, running another full stage on them when one is not normal.

        The first factors series multiply to the product the finished stage
        showed normal. The others are certified on their own.
        """
        certificates: list[NormalCertificate] = []
        for index, f in enumerate(node.series_state):
            if index < factors:
                cert = _certify_factor(f, f"tracked series {index}")
            else:
                result = is_normal(f, tracked_divisor(node, index))
                cert = result.certificate if isinstance(result, Normal) else None
            if cert is None:
                logger.debug(f"tracked series {index} is not certified at depth {node.depth}, monomializing it too")
                divisors = [(c.alpha,) for c in certificates]
                divisors.extend((tracked_divisor(node, k),) for k in range(index, len(node.series_state)))
                carried = Carried(node.depth, node.series_state, tuple(divisors))
                closure = Stage(node.nvars, carried, partial(self.finish, factors=len(node.series_state)))
                self.solve(node, closure)
                return
            certificates.append(cert)
        node.children = Leaf(tuple(certificates))


def _validate(targets: Sequence[Series], config: TreeConfig) -> int:
    if not targets:
        raise MonomializeError("nothing to monomialize")
    nvars = targets[0].nvars
    for index, f in enumerate(targets):
        if f.nvars != nvars:
            raise DimensionMismatchError(f"target {index} has {f.nvars} variables, expected {nvars}")
        if f.is_zero():
            raise MonomializeError(f"target {index} is the zero series")
        if f.trunc is not None and f.trunc < config.trunc:
            raise MonomializeError(
                f"target {index} is truncated at {f.trunc}, below the working truncation {config.trunc}",
                index=index,
            )
    return nvars


def monomialize(targets: Sequence[Series], config: TreeConfig | None = None) -> TreeNode:
    """Build an admissible tree that *-monomializes the targets.

    When a branch runs out of precision the whole tree is rebuilt at twice
    the truncation, up to config.max_trunc.

    Args:
        targets: Nonzero series in a common number of variables
        config: Depth bound, truncation and λ seeds, from settings when omitted
    Returns:
        The root of a lazily expanded tree whose expanded leaves certify every
        tracked series normal
    Raises:
        MonomializeError: On empty, zero or too coarsely truncated targets
        DepthExceededError: When a branch passes the depth bound
        InconclusiveError: When a would-be leaf is undecidable at the truncation
    """
    config = config or TreeConfig.from_settings()
    nvars = _validate(targets, config)
    trunc = config.trunc
    while True:
        root = TreeNode(tuple(targets))
        engine = Monomializer(replace(config, trunc=trunc))
        try:
            engine.solve(root, Stage(nvars, Carried(0, tuple(targets)), partial(engine.finish, factors=len(targets))))
        except PrecisionExhaustedError as e:
            if trunc >= config.max_trunc:
                raise
            trunc = min(2 * trunc, config.max_trunc)
            logger.warning(f"{e.message}, rebuilding at trunc {trunc}")
            continue
        break
    logger.info(
        f"monomialized {len(targets)} target(s) in {nvars} variables: "
        f"{sum(1 for _ in iter_leaves(root))} leaves, {sum(1 for _ in iter_families(root))} families"
    )
    return root
