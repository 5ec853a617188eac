"""Cross-validated grid search over centers, modes, learning rates and penalties."""

import argparse
import logging
import time
from dataclasses import asdict
from pathlib import Path

from ..config.grid import GridSpec, default_grid
from ..data.cv import CvPlan, grid_search
from ..data.dataset import load_csv
from ..runtime_paths import resolve_thread_count
from ..utils.atomic_write import atomic_write_frame
from ..utils.json_serializer import dump_json
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

RESULTS_FILE = "results.csv"
SUMMARY_FILE = "summary.csv"
HEAT_MAP_FILE = "heatmap.csv"
BEST_FILE = "best.json"


def _fold_count(text: str) -> int:
    value = positive_int(text)
    if value < 2:
        raise argparse.ArgumentTypeError("at least 2 folds are required")
    return value


def add_arguments(parser: argparse.ArgumentParser) -> None:
    add_data_arguments(parser)
    add_config_argument(parser)
    grid = parser.add_argument_group("grid (each flag takes one or more values)")
    grid.add_argument("--centers", type=positive_int, nargs="+", help="Values of M")
    grid.add_argument("--mode", choices=mode_choices(), nargs="+", help="Center modes")
    grid.add_argument("--lr", type=positive_float, nargs="+", help="Learning rates")
    grid.add_argument("--lambda-w", type=nonnegative_float, nargs="+", help="Weight penalties")
    grid.add_argument("--lambda-u", type=nonnegative_float, nargs="+", help="Factor penalties")
    grid.add_argument("--lambda-c", type=nonnegative_float, nargs="+", help="Center penalties")
    grid.add_argument(
        "--full-grid",
        action="store_true",
        help="Start from the published grid for the task instead of single defaults",
    )
    parser.add_argument("--folds", type=_fold_count, default=5, help="Folds (default: 5)")
    parser.add_argument(
        "--seeds", type=positive_int, default=20, help="Repetitions with seeds 0..n-1 (default: 20)"
    )
    parser.add_argument(
        "--first-seed", type=nonnegative_int, default=0, help="First repetition seed"
    )
    parser.add_argument(
        "--no-stratify",
        action="store_true",
        help="Plain k-fold splits for classification tasks",
    )
    add_training_arguments(parser)
    parser.add_argument(
        "--threads",
        type=positive_int,
        help="Parallel fold workers (default: GRBF_SPECTRUM_THREADS or 1)",
    )
    parser.add_argument("--out-dir", required=True, help="Directory for the result files")


def run(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    document = load_document(args)
    base = document.train_config(**training_overrides(args))

    grid_values = asdict(default_grid(args.task)) if args.full_grid else {}
    grid_values.update(document.grid)
    grid_values.update(
        {
            key: value
            for key, value in {
                "n_centers": args.centers,
                "center_mode": args.mode,
                "learning_rate": args.lr,
                "lambda_w": args.lambda_w,
                "lambda_u": args.lambda_u,
                "lambda_c": args.lambda_c,
            }.items()
            if value is not None
        }
    )
    grid = GridSpec.from_dict(grid_values)
    plan = CvPlan(
        n_folds=args.folds,
        seeds=tuple(range(args.first_seed, args.first_seed + args.seeds)),
        stratify=not args.no_stratify,
    )
    threads = resolve_thread_count(args.threads)
    dataset = load_csv(args.data, target=args.target, task=args.task)

    result = grid_search(dataset, grid, plan, base=base, threads=threads)

    out_dir = Path(args.out_dir).expanduser()
    results_path = atomic_write_frame(result.results_frame(), out_dir / RESULTS_FILE)
    summary_path = atomic_write_frame(result.summary.reset_index(), out_dir / SUMMARY_FILE)
    heat = result.heat_map.copy()
    heat.columns = [f"lambda_u={value:g}" for value in heat.columns]
    heat_path = atomic_write_frame(heat.reset_index(), out_dir / HEAT_MAP_FILE)
    best = {"config_index": result.best_index, "metric": result.metric, **result.best_config}
    best_path = dump_json(best, out_dir / BEST_FILE)

    manifest = RunManifest.start(
        "cv",
        argv=command_argv(args),
        config={"base": base.to_dict(), "grid": asdict(grid), "plan": asdict(plan)},
        seed=plan.seeds[0],
        inputs={"data": str(args.data)},
        outputs={
            "results": str(results_path),
            "summary": str(summary_path),
            "heat_map": str(heat_path),
            "best": str(best_path),
        },
        metrics={"best": best, "threads": threads, "rows": len(result.rows)},
    )
    manifest.wall_time = time.perf_counter() - started
    manifest.write(results_path)

    print(
        f"best config #{result.best_index}: mean test {result.metric} "
        f"{best['test_mean']:.6g} (M={best['M']}, mode={best['mode']}, lr={best['lr']:g}, "
        f"lambda_w={best['lambda_w']:g}, lambda_u={best['lambda_u']:g}, "
        f"lambda_c={best['lambda_c']:g})"
    )
    return 0
