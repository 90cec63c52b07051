"""Command line entry point."""

import argparse
import logging
import sys
from typing import Callable, Sequence

from pydantic import ValidationError

from pmaplab.api.v1.experiments import add_experiment_commands
from pmaplab.api.v1.samples import add_sample_commands
from pmaplab.core.dependencies import get_settings
from pmaplab.core.errors import ConfigError, LabError
from pmaplab.core.settings import LabSettings

logger = logging.getLogger("cli")

Handler = Callable[[argparse.Namespace, LabSettings], int]

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2


def build_parser() -> argparse.ArgumentParser:
    """Parser with one subcommand per lab operation."""
    parser = argparse.ArgumentParser(
        prog="pmaplab",
        description="Sampling and checks for p-mappings, p-trees and their limits",
    )
    parser.add_argument("--log-level", default=None, help="override PMAPLAB_LOG_LEVEL")
    subparsers = parser.add_subparsers(dest="command", required=True)
    add_experiment_commands(subparsers)
    add_sample_commands(subparsers)
    return parser


def configure_logging(level: str) -> None:
    logging.basicConfig(
        level=level.upper(),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        handlers=[logging.StreamHandler(sys.stderr)],
        force=True,
    )


def main(argv: Sequence[str] | None = None) -> int:
    """Run one command; 0 on success, 1 on a failed check, 2 on bad input."""
    args = build_parser().parse_args(argv)
    try:
        settings = get_settings()
    except ValidationError as e:
        configure_logging("INFO")
        logger.error("Invalid PMAPLAB_ settings: %s", e)
        return EXIT_CONFIG
    configure_logging(args.log_level or settings.log_level)

    handler: Handler = args.handler
    try:
        return handler(args, settings)
    except (ConfigError, ValidationError) as e:
        logger.error("Configuration error: %s", e)
        return EXIT_CONFIG
    except LabError as e:
        logger.error("%s: %s", type(e).__name__, e)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
