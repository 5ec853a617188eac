"""Full-batch Adam training of a GRBF network.

Unsupervised mode optimizes ``(w, u)`` with centers fixed at their initial
placement; supervised mode also optimizes the centers.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Dict, List, Tuple

import numpy as np
import pandas as pd
from numpy.typing import ArrayLike

from ..config.train_config import TrainConfig
from ..data.dataset import Dataset
from ..data.metrics import metrics
from ..errors import TrainingError
from ..kernel import FloatArray, PrecisionFactor
from ..model import (
    BLOCKS,
    GrbfnnModel,
    Standardization,
    TargetTransform,
    encode_targets,
    evaluate_standardized,
    forward,
    gradients_from,
    model_blocks,
    predict_labels,
)
from ..utils.atomic_write import atomic_write_frame
from .adam import AdamState, adam_step
from .kmeans import kmeans

logger = logging.getLogger(__name__)

SCALE_SUBSAMPLE = 256


@dataclass
class TrainTrace:
    """Per-epoch objective values and gradient norms of one training run."""

    loss_R: List[float] = field(default_factory=list)
    loss_E: List[float] = field(default_factory=list)
    grad_norms: Dict[str, List[float]] = field(
        default_factory=lambda: {block: [] for block in BLOCKS}
    )
    best_epoch: int = 0
    stopped_early: bool = False
    wall_time: float = 0.0

    @property
    def n_epochs(self) -> int:
        return len(self.loss_R)

    def record(
        self, loss_R: float, loss_E: float, grads: Dict[str, FloatArray]
    ) -> None:
        self.loss_R.append(loss_R)
        self.loss_E.append(loss_E)
        for block in BLOCKS:
            norm = float(np.linalg.norm(grads[block])) if block in grads else np.nan
            self.grad_norms[block].append(norm)

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame(
            {
                "epoch": np.arange(1, self.n_epochs + 1),
                "loss_R": self.loss_R,
                "loss_E": self.loss_E,
            }
        )
        for block in BLOCKS:
            frame[f"grad_norm_{block}"] = self.grad_norms[block]
        return frame

    def write_csv(self, path: str | Path) -> Path:
        return atomic_write_frame(self.to_frame(), path)


def _as_2d(values: ArrayLike, name: str) -> FloatArray:
    array = np.asarray(values, dtype=np.float64)
    if array.ndim == 1:
        array = array.reshape(-1, 1)
    if array.ndim != 2:
        raise TrainingError(f"{name} must be two-dimensional, got shape {array.shape}")
    return array


def median_distance_scale(Z: FloatArray, rng: np.random.Generator) -> float:
    """``1 / median`` pairwise distance over a subsample of at most 256 rows."""
    if Z.shape[0] > SCALE_SUBSAMPLE:
        Z = Z[rng.choice(Z.shape[0], SCALE_SUBSAMPLE, replace=False)]
    rows, cols = np.triu_indices(Z.shape[0], k=1)
    distances = np.linalg.norm(Z[rows] - Z[cols], axis=1)
    median = float(np.median(distances)) if distances.size else 0.0
    if median <= 0.0:
        raise TrainingError("Data is degenerate: need at least two distinct rows")
    return 1.0 / median


def init_model(X: ArrayLike, Y: ArrayLike, cfg: TrainConfig) -> GrbfnnModel:
    """Starting point: k-means (or random) centers, ``U = s I`` and ``w = 0``."""
    data = _as_2d(X, "X")
    targets = _as_2d(Y, "Y")
    n_rows = data.shape[0]
    if targets.shape[0] != n_rows:
        raise TrainingError(f"X has {n_rows} rows but Y has {targets.shape[0]}")
    if n_rows < cfg.n_centers:
        raise TrainingError(
            f"Need at least {cfg.n_centers} rows for {cfg.n_centers} centers, got {n_rows}"
        )
    if np.unique(data, axis=0).shape[0] < 2:
        raise TrainingError("Data is degenerate: need at least two distinct rows")

    standardization = (
        Standardization.fit(data)
        if cfg.standardize
        else Standardization.identity(data.shape[1])
    )
    Z = standardization.transform(data)
    rng = np.random.default_rng(cfg.seed)
    if cfg.center_init == "random":
        centers = Z[np.sort(rng.choice(n_rows, cfg.n_centers, replace=False))]
    else:
        centers = kmeans(Z, cfg.n_centers, rng)
    scale = median_distance_scale(Z, rng)

    return GrbfnnModel(
        weights=np.zeros((cfg.n_centers, targets.shape[1])),
        factor=PrecisionFactor.isotropic(data.shape[1], scale),
        centers=centers,
        center_mode=cfg.center_mode,
        standardization=standardization,
    )


def _pack(model: GrbfnnModel, blocks: Tuple[str, ...]) -> FloatArray:
    parts = {"w": model.weights, "u": model.factor.u, "c": model.centers}
    return np.concatenate([parts[block].reshape(-1) for block in blocks])


def _unpack(
    model: GrbfnnModel, flat: FloatArray, blocks: Tuple[str, ...]
) -> GrbfnnModel:
    shapes = {
        "w": model.weights.shape,
        "u": model.factor.u.shape,
        "c": model.centers.shape,
    }
    values = {}
    offset = 0
    for block in blocks:
        size = int(np.prod(shapes[block]))
        values[block] = flat[offset : offset + size].reshape(shapes[block])
        offset += size
    return model.with_params(
        weights=values.get("w"), u=values.get("u"), centers=values.get("c")
    )


def train(
    X: ArrayLike, Y: ArrayLike, cfg: TrainConfig
) -> Tuple[GrbfnnModel, TrainTrace]:
    """Minimize the regularized objective with full-batch Adam.

    ``Y`` is taken as given (already encoded and scaled). Returns the
    parameters of the lowest-objective epoch.

    Raises:
        TrainingError: on degenerate data or a non-finite objective
    """
    started = time.perf_counter()
    model = init_model(X, Y, cfg)
    Z = model.standardization.transform(X)
    targets = _as_2d(Y, "Y")
    blocks = model_blocks(model)
    params = _pack(model, blocks)
    state = AdamState.zeros(params.size)
    trace = TrainTrace()
    best_model, best_R = model, np.inf

    logger.info(
        "Training %s-center model (%s) on %s rows for up to %s epochs",
        cfg.n_centers,
        cfg.center_mode,
        targets.shape[0],
        cfg.max_epochs,
    )
    for epoch in range(1, cfg.max_epochs + 1):
        evaluation = evaluate_standardized(model, Z, targets, cfg.reg)
        if not np.isfinite(evaluation.loss_R):
            raise TrainingError("objective became non-finite", epoch=epoch)
        grads = gradients_from(model, evaluation, cfg.reg)
        trace.record(evaluation.loss_R, evaluation.loss_E, grads)

        if evaluation.loss_R < best_R:
            best_model, best_R = model, evaluation.loss_R
            trace.best_epoch = epoch
        if epoch % cfg.log_every == 0:
            logger.debug("epoch %s: R=%.6e E=%.6e", epoch, evaluation.loss_R, evaluation.loss_E)

        if epoch > 1:
            previous = trace.loss_R[-2]
            if abs(evaluation.loss_R - previous) <= cfg.tolerance * max(1.0, previous):
                trace.stopped_early = True
                logger.info("Objective change below tolerance at epoch %s", epoch)
                break

        params, state = adam_step(
            params, np.concatenate([grads[b].reshape(-1) for b in blocks]), state, epoch, cfg
        )
        model = _unpack(model, params, blocks)

    trace.wall_time = time.perf_counter() - started
    logger.info(
        "Best epoch %s of %s: R=%.6e (%.2fs)",
        trace.best_epoch,
        trace.n_epochs,
        best_R,
        trace.wall_time,
    )
    fitted = replace(best_model, is_fitted=True, train_config=cfg.to_dict())
    return fitted, trace


def _n_classes(dataset: Dataset) -> int:
    if dataset.class_labels:
        return len(dataset.class_labels)
    return int(np.max(dataset.y)) + 1


def fit_dataset(dataset: Dataset, cfg: TrainConfig) -> Tuple[GrbfnnModel, TrainTrace]:
    """Encode the dataset's targets for its task, train, and attach metadata."""
    target_transform = None
    if dataset.task == "regression" and cfg.scale_targets:
        target_transform = TargetTransform.fit(dataset.y)
    Y = encode_targets(dataset.task, dataset.y, _n_classes(dataset), target_transform)
    model, trace = train(dataset.X, Y, cfg)
    model = replace(
        model,
        task=dataset.task,
        target_transform=target_transform,
        class_labels=dataset.class_labels,
        feature_names=dataset.feature_names,
    )
    train_metric = next(iter(evaluate(model, dataset).values()))
    return replace(model, train_metric=train_metric), trace


def evaluate(model: GrbfnnModel, dataset: Dataset) -> Dict[str, float]:
    """Task metric of ``model`` on ``dataset``; RMSE on the normalized target scale."""
    output = forward(model, dataset.X)
    if model.task == "regression":
        y_true = np.asarray(dataset.y, dtype=np.float64)
        if model.target_transform is not None:
            y_true = model.target_transform.transform(y_true)
        return metrics("regression", y_true, output[:, 0])
    return metrics(model.task, dataset.y, predict_labels(model, output))
