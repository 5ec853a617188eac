"""Exact interpolation: one center per data point, weights from ``Phi w = Y``."""

import logging

import numpy as np
from numpy.typing import ArrayLike

from ..config.train_config import UNSUPERVISED
from ..errors import DimensionError, SingularMatrixError
from ..kernel import PrecisionFactor, kernel_matrix
from ..model import GrbfnnModel, Standardization

logger = logging.getLogger(__name__)

MAX_CONDITION = 1e12


def fit_interpolation(X: ArrayLike, Y: ArrayLike, scale: float = 1.0) -> GrbfnnModel:
    """Solve the ``N x N`` interpolation system with ``U = scale * I``.

    Inputs are used as given (no standardization). The returned model's
    centers are the rows of ``X``.

    Raises:
        SingularMatrixError: if rows repeat or ``Phi`` is too ill-conditioned
    """
    data = np.asarray(X, dtype=np.float64)
    if data.ndim == 1:
        data = data.reshape(-1, 1)
    targets = np.asarray(Y, dtype=np.float64)
    if targets.ndim == 1:
        targets = targets.reshape(-1, 1)
    if targets.shape[0] != data.shape[0]:
        raise DimensionError(
            f"X has {data.shape[0]} rows but Y has {targets.shape[0]}"
        )
    if not scale > 0:
        raise ValueError("Kernel scale must be positive")

    if np.unique(data, axis=0).shape[0] < data.shape[0]:
        raise SingularMatrixError("Interpolation points must be distinct", np.inf)

    factor = PrecisionFactor.isotropic(data.shape[1], scale)
    phi = kernel_matrix(data, data, factor)
    condition = float(np.linalg.cond(phi))
    if not np.isfinite(condition) or condition > MAX_CONDITION:
        raise SingularMatrixError("Interpolation matrix is singular", condition)
    logger.debug("Interpolation matrix condition estimate %.3e", condition)

    weights = np.linalg.solve(phi, targets)
    return GrbfnnModel(
        weights=weights,
        factor=factor,
        centers=data,
        center_mode=UNSUPERVISED,
        standardization=Standardization.identity(data.shape[1]),
        is_fitted=True,
        extras={"condition": condition},
    )
