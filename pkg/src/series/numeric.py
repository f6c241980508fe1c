"""Floating point views of exact series, used for sampling and numeric frames.

Nothing computed here feeds back into a normality certificate.
"""
from collections.abc import Sequence

import numpy as np

from .core import Series
from .core import derivative
from .errors import DimensionMismatchError


def evaluate_grid(f: Series, arrays: Sequence[np.ndarray]) -> np.ndarray:
    """Vectorized float evaluation over numpy arrays of coordinates."""
    if len(arrays) != f.nvars:
        raise DimensionMismatchError(f"{len(arrays)} coordinate arrays for {f.nvars} variables")
    shape = np.broadcast(*arrays).shape if arrays else ()
    out = np.zeros(shape, dtype=float)
    for exp, coef in f.items():
        term = np.full(shape, float(coef))
        for arr, e in zip(arrays, exp, strict=True):
            if e:
                term = term * np.asarray(arr, dtype=float) ** e
        out += term
    return out


def evaluate_float(f: Series, point: Sequence[float]) -> float:
    """Float evaluation at a single point."""
    return float(evaluate_grid(f, [np.asarray(p, dtype=float) for p in point]))


def gradient(f: Series) -> list[Series]:
    """The exact partial derivatives of f, one per variable."""
    return [derivative(f, i) for i in range(1, f.nvars + 1)]


def jacobian_at(system: Sequence[Series], point: Sequence[float]) -> np.ndarray:
    """The float Jacobian matrix of a system of series at a point, one row per series."""
    if not system:
        return np.zeros((0, len(point)))
    return np.array([[evaluate_float(df, point) for df in gradient(f)] for f in system], dtype=float)
