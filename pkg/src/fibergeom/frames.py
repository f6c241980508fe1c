"""Numeric tangent and fiber frames, projection ranks and immersion witnesses."""
from __future__ import annotations

import itertools
import logging
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from hsets.components import ChartUnion
from hsets.sets import FactorKind
from series.core import Series
from series.numeric import jacobian_at

from .errors import NotOnManifoldError
from .errors import RankDeficiencyError
from .manifold import ManifoldSpec

logger = logging.getLogger("monoforge")

# relative singular value threshold for every rank decision
RANK_TOLERANCE = 1e-9


def numeric_rank(matrix: np.ndarray, tolerance: float = RANK_TOLERANCE) -> int:
    """The number of singular values above tolerance times max(1, the largest one)."""
    if matrix.size == 0:
        return 0
    values = np.linalg.svd(matrix, compute_uv=False)
    if values[0] <= 0:
        return 0
    return int(np.sum(values > tolerance * max(1.0, values[0])))


def _reduce(v: np.ndarray, basis: Sequence[np.ndarray]) -> np.ndarray:
    # two passes of classical Gram-Schmidt
    for _ in range(2):
        for u in basis:
            v = v - np.dot(v, u) * u
    return v


@dataclass(frozen=True)
class FrameResult:
    """A tangent frame split along the projection Π_n.

    `projected` holds ã_1..ã_l, whose first n coordinates are orthonormal;
    `fiber` holds b_1..b_{d−l}, tangent vectors with Π_n b_i = 0.
    """

    point: tuple[float, ...]
    tangent: np.ndarray
    projected: np.ndarray
    fiber: np.ndarray
    rank: int


def tangent_basis(m: ManifoldSpec, z: Sequence[float]) -> np.ndarray:
    """An orthonormal basis of the tangent space at z, one row per vector.

    Gram–Schmidt runs over ∇f_1, …, ∇f_m, e_1, …, e_N; the vectors left
    after the gradients span the kernel of the Jacobian.

    Raises:
        NotOnManifoldError: When z is not a point of M
        RankDeficiencyError: When the gradients are dependent at z
    """
    point = [float(v) for v in z]
    if not m.contains(point):
        raise NotOnManifoldError(f"{point} is not on the manifold", point=point)
    jacobian = jacobian_at(m.eqs, point)
    rank = numeric_rank(jacobian)
    if rank < len(m.eqs):
        raise RankDeficiencyError(
            f"{len(m.eqs)} gradients of rank {rank} at {point}",
            point=point,
            rank=rank,
        )
    normals: list[np.ndarray] = []
    for row in jacobian:
        v = _reduce(row, normals)
        normals.append(v / np.linalg.norm(v))
    tangent: list[np.ndarray] = []
    for e in np.eye(m.nvars):
        if len(tangent) == m.d:
            break
        v = _reduce(e, normals + tangent)
        norm = np.linalg.norm(v)
        if norm > RANK_TOLERANCE:
            tangent.append(v / norm)
    return np.array(tangent).reshape(len(tangent), m.nvars)


def fiber_basis(m: ManifoldSpec, z: Sequence[float]) -> FrameResult:
    """Split a tangent frame at z into ã_1..ã_l and the fiber directions b_1..b_{d−l}.

    Every tangent vector a has its Π_n part reduced against the ã chosen so
    far. When something is left it becomes the next ã, scaled to a unit
    projection; otherwise the reduced vector is a fiber direction. The fiber
    directions are orthonormalized at the end.

    Args:
        m: The manifold
        z: A point of m
    Returns:
        The frame, with l the rank of Π_n on the tangent space
    Raises:
        NotOnManifoldError: When z is not a point of M
        RankDeficiencyError: When the gradients are dependent at z
    """
    n = m.split_n
    tangent = tangent_basis(m, z)

    def reduce_projection(a: np.ndarray, chosen: Sequence[np.ndarray]) -> np.ndarray:
        for _ in range(2):
            for t in chosen:
                a = a - np.dot(a[:n], t[:n]) * t
        return a

    chosen: list[np.ndarray] = []
    rest: list[np.ndarray] = []
    for a in tangent:
        p = reduce_projection(a, chosen)
        norm = np.linalg.norm(p[:n])
        if norm > RANK_TOLERANCE:
            chosen.append(p / norm)
        else:
            rest.append(p)
    fiber: list[np.ndarray] = []
    for p in rest:
        v = _reduce(reduce_projection(p, chosen), fiber)
        norm = np.linalg.norm(v)
        if norm > RANK_TOLERANCE:
            fiber.append(v / norm)
    return FrameResult(
        tuple(float(v) for v in z),
        tangent,
        np.array(chosen).reshape(len(chosen), m.nvars),
        np.array(fiber).reshape(len(fiber), m.nvars),
        len(chosen),
    )


def rank_at(m: ManifoldSpec, z: Sequence[float]) -> int:
    """The rank of Π_n on the tangent space at z."""
    return numeric_rank(tangent_basis(m, z)[:, : m.split_n])


@dataclass(frozen=True)
class ImmersionWitness:
    """An index sequence ι (1-based) and the smallest singular value of Π_ι seen on the samples."""

    indices: tuple[int, ...]
    margin: float


def immersion_witness(m: ManifoldSpec, samples: Sequence[Sequence[float]]) -> ImmersionWitness | None:
    """A strictly increasing ι of length d with ι(l) ≤ n and Π_ι injective on every sampled tangent space.

    l is the largest projection rank on the samples. Sequences are tried in
    lexicographic order.
    """
    if not samples:
        return None
    tangents = [tangent_basis(m, z) for z in samples]
    rank = max(numeric_rank(t[:, : m.split_n]) for t in tangents)
    if m.d == 0:
        return ImmersionWitness((), 1.0)
    for indices in itertools.combinations(range(m.nvars), m.d):
        if rank and indices[rank - 1] >= m.split_n:
            continue
        columns = list(indices)
        margin = min(float(np.linalg.svd(t[:, columns], compute_uv=False)[-1]) for t in tangents)
        if margin > RANK_TOLERANCE:
            logger.debug(f"immersion witness {[i + 1 for i in indices]} with margin {margin:.3g}")
            return ImmersionWitness(tuple(i + 1 for i in indices), margin)
    return None


def dimension_sampled(
    definition: ManifoldSpec | Sequence[Series] | ChartUnion,
    samples: Sequence[Sequence[float]] = (),
) -> int:
    """The largest local dimension seen on the samples.

    For equations this is N minus the Jacobian rank at each sample. A chart
    union is the union of diffeomorphic images of its quadrants, so its
    dimension is the largest number of open quadrant factors.
    """
    if isinstance(definition, ChartUnion):
        return max(
            (sum(f.kind != FactorKind.ZERO for f in c.quadrant.factors) for c in definition.charts),
            default=0,
        )
    eqs = definition.eqs if isinstance(definition, ManifoldSpec) else tuple(definition)
    dims = []
    for z in samples:
        point = [float(v) for v in z]
        dims.append(len(point) - numeric_rank(jacobian_at(eqs, point)))
    if not dims:
        logger.warning("no samples, dimension reported as 0")
    return max(dims, default=0)
