"""
Ordinary least squares through a column-pivoted QR decomposition.
"""

import logging
from typing import NamedTuple

import numpy as np
import scipy.linalg

from common.errors import CollinearityError, DegenerateSeriesError

logger = logging.getLogger(__name__)

# Columns whose R diagonal falls below this fraction of the largest are collinear
RANK_TOLERANCE = 1e-10


class OlsFit(NamedTuple):
    coefficients: np.ndarray
    rss: float


def ols(design: np.ndarray, target: np.ndarray) -> OlsFit:
    """
    Least-squares coefficients and residual sum of squares.

    Args:
        design: Matrix of regressors, one row per observation
        target: Regressand, one value per row

    Raises:
        DegenerateSeriesError: If there are fewer rows than columns
        CollinearityError: If the design is rank deficient, naming the collinear columns
    """
    design = np.asarray(design, dtype=float)
    target = np.asarray(target, dtype=float)
    if design.ndim != 2 or target.ndim != 1 or design.shape[0] != target.shape[0]:
        raise ValueError(f"design {design.shape} and target {target.shape} do not match")
    rows, cols = design.shape
    if rows < cols:
        raise DegenerateSeriesError(f"{rows} observations cannot identify {cols} coefficients")

    q, r, pivots = scipy.linalg.qr(design, mode='economic', pivoting=True)
    diag = np.abs(np.diag(r))
    largest = diag[0] if diag.size else 0.0
    rank = int(np.sum(diag > RANK_TOLERANCE * largest)) if largest > 0 else 0
    if rank < cols:
        raise CollinearityError(sorted(int(c) for c in pivots[rank:]))

    solution = scipy.linalg.solve_triangular(r, q.T @ target)
    coefficients = np.empty(cols)
    coefficients[pivots] = solution
    residuals = target - design @ coefficients
    return OlsFit(coefficients, float(residuals @ residuals))


def residuals(design: np.ndarray, target: np.ndarray) -> np.ndarray:
    """Residual vector of the least-squares fit"""
    fit = ols(design, target)
    return np.asarray(target, dtype=float) - np.asarray(design, dtype=float) @ fit.coefficients
