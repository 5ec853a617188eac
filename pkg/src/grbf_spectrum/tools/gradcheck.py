"""Check analytic gradients against finite differences on a random instance."""

import argparse
import logging
import time
from typing import Tuple

import numpy as np

from ..config.train_config import MODE_ALIASES, Regularizers
from ..kernel import FloatArray, PrecisionFactor, vech_length
from ..model import GrbfnnModel, Standardization, gradient_check
from ..utils.atomic_write import atomic_write_text
from ..utils.manifest import RunManifest
from .arguments import (
    command_argv,
    mode_choices,
    nonnegative_float,
    nonnegative_int,
    positive_float,
    positive_int,
)

logger = logging.getLogger(__name__)


def build_random_instance(
    n: int, d: int, m: int, outputs: int, center_mode: str, seed: int
) -> Tuple[GrbfnnModel, FloatArray, FloatArray]:
    """Model, inputs and targets with every entry uniform on [-1, 1]."""
    rng = np.random.default_rng(seed)
    model = GrbfnnModel(
        weights=rng.uniform(-1.0, 1.0, size=(m, outputs)),
        factor=PrecisionFactor(dim=d, u=rng.uniform(-1.0, 1.0, size=vech_length(d))),
        centers=rng.uniform(-1.0, 1.0, size=(m, d)),
        center_mode=MODE_ALIASES.get(center_mode, center_mode),
        standardization=Standardization.identity(d),
    )
    X = rng.uniform(-1.0, 1.0, size=(n, d))
    Y = rng.uniform(-1.0, 1.0, size=(n, outputs))
    return model, X, Y


def add_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--n", type=positive_int, default=10, help="Rows (default: 10)")
    parser.add_argument("--d", type=positive_int, default=4, help="Features (default: 4)")
    parser.add_argument("--m", type=positive_int, default=3, help="Centers (default: 3)")
    parser.add_argument("--outputs", type=positive_int, default=1, help="Outputs (default: 1)")
    parser.add_argument("--mode", choices=mode_choices(), default="kmeans", help="Center mode")
    parser.add_argument("--seed", type=nonnegative_int, default=0, help="Random seed")
    parser.add_argument("--lambda-w", type=nonnegative_float, default=0.1)
    parser.add_argument("--lambda-u", type=nonnegative_float, default=0.1)
    parser.add_argument("--lambda-c", type=nonnegative_float, default=0.1)
    parser.add_argument(
        "--step", type=positive_float, default=1e-5, help="Finite-difference step"
    )
    parser.add_argument(
        "--tol", type=positive_float, default=1e-5, help="Pass threshold on relative error"
    )
    parser.add_argument("--out", help="Also write the report to this file")


def run(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    model, X, Y = build_random_instance(
        args.n, args.d, args.m, args.outputs, args.mode, args.seed
    )
    reg = Regularizers(
        lambda_w=args.lambda_w, lambda_u=args.lambda_u, lambda_c=args.lambda_c
    )
    report = gradient_check(model, X, Y, reg, step=args.step)
    passed = report.passed(args.tol)
    text = report.render()
    print(text)
    print(f"max relative error {report.max_error:.3e}: {'PASS' if passed else 'FAIL'}")

    if args.out:
        out_path = atomic_write_text(args.out, text + "\n")
        manifest = RunManifest.start(
            "gradcheck",
            argv=command_argv(args),
            config={
                "n": args.n,
                "d": args.d,
                "m": args.m,
                "outputs": args.outputs,
                "mode": args.mode,
                "step": args.step,
                "tol": args.tol,
                "reg": vars(reg),
            },
            seed=args.seed,
            outputs={"report": str(out_path)},
            metrics={"errors": report.errors, "passed": passed},
        )
        manifest.wall_time = time.perf_counter() - started
        manifest.write(out_path)

    if not passed:
        logger.error("Gradient check failed (tolerance %g)", args.tol)
        return 1
    return 0
