"""
Entry points of the harness: run one catalog experiment from a config.
"""

import logging
from pathlib import Path

from pydantic import ValidationError

from pmaplab.core.errors import ConfigError
from pmaplab.core.models import ExperimentConfig, ExperimentReport
from pmaplab.core.settings import LabSettings
from pmaplab.plugins import get_experiment

# Setup logger
logger = logging.getLogger("runner")


def load_config(path: str | Path) -> ExperimentConfig:
    """Read and validate an experiment config from JSON."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        logger.error("Cannot read config %s: %s", path, e)
        raise ConfigError(f"Cannot read config {path}") from e
    try:
        return ExperimentConfig.model_validate_json(text)
    except ValidationError as e:
        logger.error("Invalid config %s: %s", path, e)
        raise ConfigError(f"Invalid config {path}: {e}") from e


def run_experiment(cfg: ExperimentConfig, settings: LabSettings) -> ExperimentReport:
    """Dispatch to the catalog and return the summary with its pass/fail verdict."""
    logger.info("Running %s with %s replications", cfg.experiment.value, cfg.replications)
    report = get_experiment(cfg.experiment)(cfg, settings)
    logger.info("%s %s", cfg.experiment.value, "passed" if report.passed else "failed")
    return report
