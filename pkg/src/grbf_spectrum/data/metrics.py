"""Scoring for regression and classification runs."""

from typing import Dict

import numpy as np
from numpy.typing import ArrayLike

from ..errors import DimensionError

RMSE = "rmse"
ACCURACY = "accuracy"


def metric_name(task: str) -> str:
    return RMSE if task == "regression" else ACCURACY


def higher_is_better(task: str) -> bool:
    return metric_name(task) == ACCURACY


def metrics(task: str, y_true: ArrayLike, y_pred: ArrayLike) -> Dict[str, float]:
    """``{"rmse": ...}`` for regression, ``{"accuracy": ...}`` otherwise."""
    truth = np.asarray(y_true).reshape(-1)
    pred = np.asarray(y_pred).reshape(-1)
    if truth.size != pred.size:
        raise DimensionError(
            f"Length mismatch: {truth.size} true values vs {pred.size} predictions"
        )
    if truth.size == 0:
        raise ValueError("Cannot score an empty prediction")
    if task == "regression":
        error = truth.astype(np.float64) - pred.astype(np.float64)
        return {RMSE: float(np.sqrt(np.mean(error**2)))}
    return {ACCURACY: float(np.mean(truth == pred))}
