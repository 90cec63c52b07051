"""
Shared plumbing of the experiment catalog: laws from configs, thresholds and CSV output.
"""

import logging
from typing import Callable, Iterable, Mapping

import numpy as np

from pmaplab.core.errors import ConfigError, LabError
from pmaplab.core.models import ExperimentConfig, ExperimentReport, WeightSpec
from pmaplab.core.prob import RankedProb, make_hub_family
from pmaplab.core.settings import LabSettings

from .replication import Row, write_csv

# Setup logger
logger = logging.getLogger("reporting")

ExperimentRunner = Callable[[ExperimentConfig, LabSettings], ExperimentReport]


def family_probability(cfg: ExperimentConfig) -> RankedProb:
    """Hub family of the config; invalid families become configuration errors."""
    try:
        return make_hub_family(cfg.family())
    except LabError as e:
        logger.error("Invalid family theta=%s n=%s: %s", cfg.theta, cfg.n, e)
        raise ConfigError(f"Invalid family: {e}") from e


def padded_probability(base: list[float], n: int) -> RankedProb:
    """Base vector truncated or padded with its last entry to length n, then renormalized."""
    if not base:
        raise ConfigError("base_p must not be empty")
    values = base[:n] + [base[-1]] * max(0, n - len(base))
    try:
        return RankedProb.from_weights(values)
    except LabError as e:
        raise ConfigError(f"Invalid base_p: {e}") from e


def resolve_weights(spec: WeightSpec, p: RankedProb) -> np.ndarray:
    """Weights named by a config: ``"p"``, ``"uniform"`` or an explicit list."""
    if spec == "p":
        return p.values
    if spec == "uniform":
        return np.full(p.n, 1.0 / p.n)
    values = np.asarray(spec, dtype=np.float64)
    if values.size != p.n or np.any(values <= 0.0):
        raise ConfigError(f"Explicit weights must be {p.n} positive numbers")
    return values / values.sum()


def master_seed(cfg: ExperimentConfig, settings: LabSettings) -> int:
    return settings.seed if cfg.seed is None else cfg.seed


def build_report(
    cfg: ExperimentConfig,
    rows: Iterable[Row],
    statistics: Mapping[str, float],
    thresholds: Mapping[str, float],
) -> ExperimentReport:
    """
    Pass iff every thresholded statistic is at most its threshold; rows go to ``cfg.output``.
    """
    passed = all(statistics[name] <= limit for name, limit in thresholds.items())
    for name, limit in thresholds.items():
        logger.info(
            "%s %s = %s (threshold %s)", cfg.experiment.value, name, statistics[name], limit
        )
    output = str(write_csv(rows, cfg.output)) if cfg.output else None
    return ExperimentReport(
        experiment=cfg.experiment,
        passed=passed,
        replications=cfg.replications,
        statistics=dict(statistics),
        thresholds=dict(thresholds),
        output=output,
    )
