#!/usr/bin/env python3
"""
grbf-spectrum command line
Trains Gaussian RBF networks with a learned precision matrix and exports
the spectral analysis of the fitted models.
"""

import argparse
import logging
import sys
from types import ModuleType
from typing import Sequence

from . import __version__
from .errors import GrbfError
from .runtime_paths import resolve_runtime_paths
from .tools import analyze, cv, gradcheck, predict, synth, train

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
SUBCOMMAND_HANDLERS: dict[str, ModuleType] = {
    "synth": synth,
    "train": train,
    "analyze": analyze,
    "cv": cv,
    "predict": predict,
    "gradcheck": gradcheck,
}


def build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="grbf-spectrum",
        description="Gaussian RBF networks with a learned precision matrix",
    )
    parser.add_argument(
        "--version",
        action="version",
        version=f"%(prog)s {__version__}",
    )
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument(
        "-v", "--verbose", action="store_true", help="Log debug messages"
    )
    verbosity.add_argument(
        "-q", "--quiet", action="store_true", help="Only log warnings and errors"
    )
    parser.add_argument(
        "--config-dir",
        help="Directory containing defaults.yaml",
    )
    parser.add_argument(
        "--print-paths",
        action="store_true",
        help="Print resolved config path and thread count and exit",
    )

    subparsers = parser.add_subparsers(dest="command", metavar="command")
    for name, module in SUBCOMMAND_HANDLERS.items():
        summary = (module.__doc__ or "").strip().splitlines()[0]
        subparser = subparsers.add_parser(name, help=summary, description=summary)
        module.add_arguments(subparser)
        subparser.set_defaults(handler=module.run)
    return parser


def configure_logging(verbose: bool = False, quiet: bool = False) -> None:
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    logging.basicConfig(
        level=level,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )


def run_cli(argv: Sequence[str] | None = None) -> int:
    """Parse ``argv`` and run the chosen subcommand; returns the exit code."""
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_arg_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    configure_logging(args.verbose, args.quiet)

    if args.print_paths:
        try:
            print(resolve_runtime_paths(config_dir=args.config_dir).render())
        except ValueError as e:
            logger.error("%s", e)
            return EXIT_FAILURE
        return EXIT_OK

    if not args.command:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: a command is required", file=sys.stderr)
        return EXIT_USAGE

    args.argv = argv
    try:
        return args.handler(args)
    except (GrbfError, ValueError, OSError) as e:
        logger.error("%s failed: %s", args.command, e)
        logger.debug("Traceback", exc_info=True)
        return EXIT_FAILURE


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
