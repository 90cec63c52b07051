"""Experiment catalog."""

from pmaplab.core.errors import ConfigError
from pmaplab.core.models import ExperimentId
from pmaplab.harness.reporting import ExperimentRunner

from .exact import create_exact_catalog
from .montecarlo import create_montecarlo_catalog


def get_experiment(experiment: ExperimentId) -> ExperimentRunner:
    """Runner registered for a catalog id."""
    catalog = {**create_exact_catalog(), **create_montecarlo_catalog()}
    try:
        return catalog[experiment]
    except KeyError as e:
        raise ConfigError(f"No experiment registered as {experiment}") from e
