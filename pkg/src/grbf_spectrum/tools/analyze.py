"""Spectral analysis of a trained model: importance, eigenvalues, projection, surface."""

import argparse
import logging
import time
from pathlib import Path

import numpy as np
import pandas as pd

from ..data.dataset import DEFAULT_TARGET, load_features
from ..errors import DimensionError
from ..model import load_model
from ..spectrum import (
    active_dimension,
    active_projection,
    feature_importance,
    model_spectrum,
    selection_report,
    subspace_surface,
)
from ..utils.atomic_write import atomic_write_frame
from ..utils.manifest import RunManifest
from .arguments import command_argv, positive_int

logger = logging.getLogger(__name__)

IMPORTANCE_FILE = "importance.csv"
EIGENVALUES_FILE = "eigenvalues.csv"
PROJECTION_FILE = "projection.csv"
SURFACE_FILE = "surface.csv"


def _threshold(text: str) -> float:
    value = float(text)
    if not 0.0 < value <= 1.0:
        raise argparse.ArgumentTypeError(f"threshold must be in (0, 1], got {value}")
    return value


def _feature_indices(text: str) -> list[int]:
    try:
        indices = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated feature numbers, got {text!r}")
    if not indices or min(indices) < 1:
        raise argparse.ArgumentTypeError("feature numbers start at 1")
    return indices


def add_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("model", help="Model JSON written by 'train'")
    parser.add_argument("data", help="CSV whose feature columns match the model")
    parser.add_argument(
        "--target",
        default=DEFAULT_TARGET,
        help="Target column, copied into the projection export if present (default: y)",
    )
    parser.add_argument("--out-dir", required=True, help="Directory for the CSV exports")
    parser.add_argument(
        "--components",
        type=positive_int,
        help="Projection dimension (default: active dimension at --threshold)",
    )
    parser.add_argument(
        "--threshold",
        type=_threshold,
        default=0.95,
        help="Eigenvalue share defining the active dimension (default: 0.95)",
    )
    parser.add_argument(
        "--resolution",
        type=positive_int,
        default=50,
        help="Grid points per axis of the surface (default: 50)",
    )
    parser.add_argument(
        "--relevant",
        type=_feature_indices,
        help="Known relevant features (1-based, comma-separated) to score the ranking against",
    )


def run(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    model = load_model(args.model)
    X, feature_names, target = load_features(args.data, target=args.target)
    if X.shape[1] != model.n_features:
        raise DimensionError(
            f"Data has {X.shape[1]} features but the model expects {model.n_features}"
        )
    names = model.feature_names or feature_names
    out_dir = Path(args.out_dir).expanduser()

    spectrum = model_spectrum(model)
    importance = feature_importance(spectrum)
    active = active_dimension(spectrum, args.threshold)
    components = args.components or active
    Z = model.standardization.transform(X)
    projection = active_projection(Z, spectrum, components)

    rank = np.empty(model.n_features, dtype=np.int64)
    rank[importance.ranking] = np.arange(1, model.n_features + 1)
    importance_frame = pd.DataFrame(
        {"feature": list(names), "score": importance.scores, "rank": rank}
    )
    for k in range(spectrum.dim):
        importance_frame[f"component_{k + 1}"] = importance.per_component[:, k]
    importance_path = atomic_write_frame(importance_frame, out_dir / IMPORTANCE_FILE)
    eigen_frame = pd.DataFrame(
        {
            "k": np.arange(1, spectrum.dim + 1),
            "gamma": spectrum.eigenvalues,
            "decay": spectrum.decay,
            "cumulative": spectrum.cumulative,
        }
    )
    for j, name in enumerate(names):
        eigen_frame[f"v_{name}"] = spectrum.eigenvectors[j, :]
    projection_frame = pd.DataFrame(projection, columns=[f"z{k + 1}" for k in range(components)])
    if target is not None:
        projection_frame["target"] = target
    outputs = {
        "importance": str(importance_path),
        "eigenvalues": str(atomic_write_frame(eigen_frame, out_dir / EIGENVALUES_FILE)),
        "projection": str(atomic_write_frame(projection_frame, out_dir / PROJECTION_FILE)),
    }

    if model.n_features >= 2:
        plane = active_projection(Z, spectrum, 2)
        bounds = (
            float(plane[:, 0].min()),
            float(plane[:, 0].max()),
            float(plane[:, 1].min()),
            float(plane[:, 1].max()),
        )
        surface = subspace_surface(model, spectrum, bounds, args.resolution)
        surface_frame = pd.DataFrame({"z1": surface.z1, "z2": surface.z2})
        if model.n_outputs == 1:
            surface_frame["f"] = surface.values[:, 0]
        else:
            for o in range(model.n_outputs):
                surface_frame[f"f{o + 1}"] = surface.values[:, o]
        outputs["surface"] = str(atomic_write_frame(surface_frame, out_dir / SURFACE_FILE))
    else:
        logger.warning("Model has a single feature; skipping the subspace surface")

    metrics = {
        "dominant_ratio": spectrum.dominant_ratio,
        "active_dimension": active,
        "threshold": args.threshold,
        "components": components,
    }
    if args.relevant:
        if max(args.relevant) > model.n_features:
            raise ValueError(f"--relevant refers to feature {max(args.relevant)} of {model.n_features}")
        mask = np.zeros(model.n_features, dtype=bool)
        mask[np.asarray(args.relevant) - 1] = True
        report = selection_report(importance.scores, mask)
        metrics["selection"] = {
            "top_k_hits": report.top_k_hits,
            "n_relevant": report.n_relevant,
            "violations": report.violations,
            "mean_absolute_error": report.mean_absolute_error,
        }
        print(
            f"relevant features in top {report.n_relevant}: {report.top_k_hits}, "
            f"violations: {report.violations}, MAE: {report.mean_absolute_error:.4f}"
        )

    manifest = RunManifest.start(
        "analyze",
        argv=command_argv(args),
        config={
            "threshold": args.threshold,
            "components": args.components,
            "resolution": args.resolution,
        },
        inputs={"model": str(args.model), "data": str(args.data)},
        outputs=outputs,
        metrics=metrics,
    )
    manifest.wall_time = time.perf_counter() - started
    manifest.write(importance_path)

    print(f"gamma_1/sum(gamma): {spectrum.dominant_ratio:.6f}")
    print(f"active dimension at {args.threshold:g}: {active}")
    return 0
