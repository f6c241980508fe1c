"""Connected components of a grid sampled set."""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import ndimage
from utils.parallel import parallel_map

from .errors import HSetError
from .parametrize import chart_covers
from .sets import Chart
from .sets import HBasicSet

logger = logging.getLogger("monoforge")


@dataclass(frozen=True)
class ChartUnion:
    """The union of chart images, sampled on the polydisk Δ_r."""

    charts: tuple[Chart, ...]
    polyradius: tuple[Fraction, ...]

    def membership_mask(self, grid: int, threads: int | None = None) -> np.ndarray:
        """Cells whose centre lies in some chart image."""
        axes = HBasicSet(self.polyradius).grid_axes(grid)
        shape = tuple(len(axis) for axis in axes)
        cells = list(itertools.product(*(range(size) for size in shape)))

        def covered(index: tuple[int, ...]) -> bool:
            point = [float(axes[k][i]) for k, i in enumerate(index)]
            return any(chart_covers(chart, point) for chart in self.charts)

        return np.array(parallel_map(covered, cells, threads=threads), dtype=bool).reshape(shape)


def count_mask_components(mask: np.ndarray) -> int:
    """Components of a boolean array under face adjacency."""
    _, count = ndimage.label(mask)
    return int(count)


def count_components_sampled(definition: HBasicSet | ChartUnion, grid: int) -> int:
    """Number of connected components of the grid sampled membership mask.

    Args:
        definition: A set, or a union of charts
        grid: Cells per unit length
    Returns:
        The number of face connected components
    """
    if grid <= 0:
        raise HSetError(f"grid resolution must be positive, got {grid}")
    mask = definition.membership_mask(grid)
    count = count_mask_components(mask)
    logger.debug(f"{int(mask.sum())} sampled cell(s) form {count} component(s)")
    return count
