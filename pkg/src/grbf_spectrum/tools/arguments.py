"""Argument types and option groups shared by the subcommands."""

import argparse
import logging
from typing import Any, Dict

from ..config import ConfigDocument, load_config
from ..config.train_config import CENTER_INITS, MODE_ALIASES
from ..data.dataset import DEFAULT_TARGET
from ..model import TASKS
from ..runtime_paths import resolve_runtime_paths

logger = logging.getLogger(__name__)


def positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def nonnegative_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text!r}")
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {value}")
    return value


def positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text!r}")
    if not value > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {value}")
    return value


def nonnegative_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a nonnegative number, got {text!r}")
    if not value >= 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative number, got {value}")
    return value


def add_data_arguments(parser: argparse.ArgumentParser, with_task: bool = True) -> None:
    parser.add_argument("data", help="CSV file with a header row")
    parser.add_argument(
        "--target",
        default=DEFAULT_TARGET,
        help=f"Name of the target column (default: {DEFAULT_TARGET})",
    )
    if with_task:
        parser.add_argument(
            "--task",
            choices=TASKS,
            default="regression",
            help="Learning task (default: regression)",
        )


def add_config_argument(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--config",
        help="YAML file with 'train' and 'grid' sections; flags override it",
    )


def add_training_arguments(parser: argparse.ArgumentParser) -> None:
    """Optimizer options common to ``train`` and ``cv``; unset flags defer to config."""
    parser.add_argument("--epochs", type=positive_int, help="Maximum epochs (default: 10000)")
    parser.add_argument(
        "--tol",
        type=nonnegative_float,
        help="Stop when |dR| <= tol * max(1, R) (default: 1e-9)",
    )
    parser.add_argument(
        "--center-init",
        choices=CENTER_INITS,
        help="Initial center placement (default: kmeans)",
    )


def mode_choices() -> list[str]:
    return sorted(MODE_ALIASES)


def load_document(args: argparse.Namespace) -> ConfigDocument:
    """``--config`` when given, else ``defaults.yaml`` from the config dir, else empty."""
    if getattr(args, "config", None):
        return load_config(args.config)
    defaults_file = resolve_runtime_paths(
        config_dir=getattr(args, "config_dir", None)
    ).defaults_file
    if defaults_file.exists():
        logger.info("Using defaults from %s", defaults_file)
        return load_config(defaults_file)
    return ConfigDocument()


def training_overrides(args: argparse.Namespace) -> Dict[str, Any]:
    return {
        "max_epochs": args.epochs,
        "tolerance": args.tol,
        "center_init": args.center_init,
    }


def command_argv(args: argparse.Namespace) -> list[str]:
    """The command line to record in manifests."""
    return ["grbf-spectrum", *getattr(args, "argv", [])]
