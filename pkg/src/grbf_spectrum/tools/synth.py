"""Generate a synthetic dataset as CSV."""

import argparse
import logging
import time
from pathlib import Path

from ..data.dataset import save_csv
from ..data.synthetic import PROBLEMS, generate
from ..utils.manifest import RunManifest
from .arguments import command_argv, nonnegative_float, nonnegative_int, positive_int

logger = logging.getLogger(__name__)


def add_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("problem", choices=PROBLEMS, help="Problem to generate")
    parser.add_argument("--n", type=positive_int, default=1000, help="Rows (default: 1000)")
    parser.add_argument("--seed", type=nonnegative_int, default=0, help="Random seed")
    parser.add_argument("--out", required=True, help="Output CSV path")
    parser.add_argument(
        "--noise",
        type=nonnegative_float,
        help="Noise level (p3: target noise std; moons, sine_ridge)",
    )
    parser.add_argument("--a", type=float, help="sine_ridge coefficient of x1")
    parser.add_argument("--b", type=float, help="sine_ridge coefficient of x2")


def run(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    params = {}
    if args.noise is not None:
        if args.problem in ("p1", "p2", "two_gaussians"):
            raise ValueError(f"Problem '{args.problem}' takes no noise level")
        params["noise"] = args.noise
    for name in ("a", "b"):
        value = getattr(args, name)
        if value is not None:
            if args.problem != "sine_ridge":
                raise ValueError(f"--{name} only applies to sine_ridge")
            params[name] = value

    dataset = generate(args.problem, args.n, args.seed, **params)
    out_path = save_csv(dataset, args.out)

    manifest = RunManifest.start(
        "synth",
        argv=command_argv(args),
        config={"problem": args.problem, "n": args.n, **params},
        seed=args.seed,
        outputs={"data": str(out_path)},
        metrics={"rows": dataset.n_samples, "features": dataset.n_features},
    )
    if dataset.relevant_mask is not None:
        manifest.metrics["relevant_features"] = [
            name
            for name, relevant in zip(dataset.feature_names, dataset.relevant_mask)
            if relevant
        ]
    manifest.wall_time = time.perf_counter() - started
    manifest.write(out_path)

    logger.info("Wrote %s rows to %s", dataset.n_samples, out_path)
    print(Path(out_path))
    return 0
