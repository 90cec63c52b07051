"""
Cached accessors shared by the command line and the experiment catalog.
"""

import logging
from functools import lru_cache
from pathlib import Path

from .errors import ConfigError
from .settings import LabSettings

# Setup logger
logger = logging.getLogger("dependencies")


@lru_cache()
def get_settings() -> LabSettings:
    """
    Get the settings for the laboratory.
    """
    settings = LabSettings()  # Reads PMAPLAB_* vars from .env
    logger.info("get_settings returning LabSettings with output_dir: %s", settings.output_dir)
    return settings


@lru_cache()
def get_output_dir() -> Path:
    """
    Returns the output directory, creating it when missing.
    """
    settings = get_settings()
    try:
        settings.output_dir.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        logger.error("Cannot create output directory %s: %s", settings.output_dir, e)
        raise ConfigError(f"Cannot create output directory: {settings.output_dir}") from e
    logger.info("Using output directory: %s", settings.output_dir)
    return settings.output_dir
