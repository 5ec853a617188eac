"""Predict with a trained model; scores the predictions when targets are present."""

import argparse
import logging
import time

import numpy as np
import pandas as pd

from ..data.dataset import DEFAULT_TARGET, Dataset, load_features
from ..data.metrics import metric_name
from ..errors import DataFormatError, DimensionError
from ..model import GrbfnnModel, forward, load_model, predict, predict_proba
from ..training.trainer import evaluate
from ..utils.atomic_write import atomic_write_frame
from ..utils.manifest import RunManifest
from .arguments import command_argv

logger = logging.getLogger(__name__)


def add_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("model", help="Model JSON written by 'train'")
    parser.add_argument("data", help="CSV whose feature columns match the model")
    parser.add_argument(
        "--target",
        default=DEFAULT_TARGET,
        help="Target column; when present the predictions are scored (default: y)",
    )
    parser.add_argument("--out", required=True, help="Output CSV path")


def _scoring_dataset(model: GrbfnnModel, X: np.ndarray, targets: np.ndarray) -> Dataset:
    """Targets mapped onto the model's class indices for classification."""
    if model.task == "regression":
        return Dataset(X=X, y=targets, task="regression")
    lookup = {label: index for index, label in enumerate(model.class_labels)}
    try:
        y = [lookup[value] for value in targets.tolist()]
    except KeyError as e:
        raise DataFormatError(f"target label {e.args[0]!r} was not seen in training")
    return Dataset(X=X, y=y, task=model.task, class_labels=model.class_labels)


def run(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    model = load_model(args.model)
    X, _, targets = load_features(args.data, target=args.target)
    if X.shape[1] != model.n_features:
        raise DimensionError(
            f"Data has {X.shape[1]} features but the model expects {model.n_features}"
        )

    frame = pd.DataFrame({"prediction": predict(model, X)})
    if model.task != "regression":
        proba = predict_proba(model, X)
        if model.task == "binary":
            frame["proba"] = proba[:, 0]
        else:
            for index, label in enumerate(model.class_labels):
                frame[f"proba_{label}"] = proba[:, index]
    else:
        frame["normalized"] = forward(model, X)[:, 0]
    out_path = atomic_write_frame(frame, args.out)

    metrics = {"rows": int(X.shape[0])}
    if targets is not None:
        name = metric_name(model.task)
        value = evaluate(model, _scoring_dataset(model, X, targets))[name]
        metrics[name] = value
        print(f"{name}: {value:.6g}")

    manifest = RunManifest.start(
        "predict",
        argv=command_argv(args),
        inputs={"model": str(args.model), "data": str(args.data)},
        outputs={"predictions": str(out_path)},
        metrics=metrics,
    )
    manifest.wall_time = time.perf_counter() - started
    manifest.write(out_path)

    logger.info("Wrote %s predictions to %s", X.shape[0], out_path)
    return 0
