"""Experiment and self-check commands."""

import argparse
import logging

from pmaplab.core.models import CheckSuite
from pmaplab.core.settings import LabSettings
from pmaplab.harness.checks import run_check
from pmaplab.harness.runner import load_config, run_experiment

from .output import emit

logger = logging.getLogger("experiments")


def experiment_command(args: argparse.Namespace, settings: LabSettings) -> int:
    """Run one catalog experiment from a JSON config."""
    cfg = load_config(args.config)
    if args.workers is not None:
        cfg = cfg.model_copy(update={"workers": args.workers})
    report = run_experiment(cfg, settings)
    emit(report, args.report)
    return 0 if report.passed else 1


def check_command(args: argparse.Namespace, settings: LabSettings) -> int:
    """Run a self-check suite."""
    seed = settings.seed if args.seed is None else args.seed
    report = run_check(CheckSuite(args.suite), seed, args.instances)
    emit(report, None)
    return 0 if report.passed else 1


def add_experiment_commands(
    subparsers: "argparse._SubParsersAction[argparse.ArgumentParser]",
) -> None:
    """Register ``experiment`` and ``check``."""
    experiment = subparsers.add_parser("experiment", help="run a catalog experiment")
    experiment.add_argument("config", help="experiment config JSON")
    experiment.add_argument("--workers", type=int, default=None, help="worker processes")
    experiment.add_argument("--report", default=None, help="write the summary JSON here")
    experiment.set_defaults(handler=experiment_command)

    check = subparsers.add_parser("check", help="run a self-check suite")
    check.add_argument("--suite", choices=[suite.value for suite in CheckSuite], required=True)
    check.add_argument("--instances", type=int, default=100, help="randomized instances")
    check.add_argument("--seed", type=int, default=None, help="master seed")
    check.set_defaults(handler=check_command)
