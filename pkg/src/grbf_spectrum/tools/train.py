"""Train a model on a CSV dataset."""

import argparse
import logging
import time
from pathlib import Path

from ..data.dataset import load_csv
from ..data.metrics import metric_name
from ..model import save_model
from ..training.trainer import fit_dataset
from ..utils.manifest import RunManifest
from .arguments import (
    add_config_argument,
    add_data_arguments,
    add_training_arguments,
    command_argv,
    load_document,
    mode_choices,
    nonnegative_float,
    nonnegative_int,
    positive_float,
    positive_int,
    training_overrides,
)

logger = logging.getLogger(__name__)


def add_arguments(parser: argparse.ArgumentParser) -> None:
    add_data_arguments(parser)
    add_config_argument(parser)
    parser.add_argument("--centers", type=positive_int, help="Number of centers M (default: 32)")
    parser.add_argument(
        "--mode",
        choices=mode_choices(),
        help="kmeans: fixed k-means centers; learn: centers are trained (default: kmeans)",
    )
    parser.add_argument("--lambda-w", type=nonnegative_float, help="Weight penalty")
    parser.add_argument("--lambda-u", type=nonnegative_float, help="Precision factor penalty")
    parser.add_argument("--lambda-c", type=nonnegative_float, help="Center penalty (learn mode)")
    parser.add_argument("--lr", type=positive_float, help="Adam learning rate (default: 1e-3)")
    parser.add_argument("--seed", type=nonnegative_int, help="Random seed (default: 0)")
    add_training_arguments(parser)
    parser.add_argument("--model-out", required=True, help="Path of the model JSON file")
    parser.add_argument(
        "--trace-out",
        help="Path of the per-epoch trace CSV (default: <model-out>.trace.csv)",
    )


def trace_path_for(model_out: str | Path) -> Path:
    target = Path(model_out)
    return target.with_name(target.stem + ".trace.csv")


def run(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    document = load_document(args)
    cfg = document.train_config(
        n_centers=args.centers,
        center_mode=args.mode,
        lambda_w=args.lambda_w,
        lambda_u=args.lambda_u,
        lambda_c=args.lambda_c,
        learning_rate=args.lr,
        seed=args.seed,
        **training_overrides(args),
    )
    dataset = load_csv(args.data, target=args.target, task=args.task)

    model, trace = fit_dataset(dataset, cfg)
    model_path = save_model(model, args.model_out)
    trace_path = trace.write_csv(args.trace_out or trace_path_for(args.model_out))

    metric = metric_name(dataset.task)
    manifest = RunManifest.start(
        "train",
        argv=command_argv(args),
        config=cfg.to_dict(),
        seed=cfg.seed,
        inputs={"data": str(args.data)},
        outputs={"model": str(model_path), "trace": str(trace_path)},
        metrics={
            f"train_{metric}": model.train_metric,
            "epochs": trace.n_epochs,
            "best_epoch": trace.best_epoch,
            "final_loss_R": trace.loss_R[trace.best_epoch - 1],
        },
    )
    manifest.wall_time = time.perf_counter() - started
    manifest.write(model_path)

    print(f"train {metric}: {model.train_metric:.6g}")
    return 0
