"""
Settings for the laboratory.
"""

import logging
import os
from pathlib import Path
from typing import Any

from dotenv import load_dotenv
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

# Setup logger
logger = logging.getLogger("settings")

load_dotenv()

ENUMERATION_HARD_LIMIT = 7
GRID_LOG2_MIN = 8
GRID_LOG2_MAX = 20

logger.debug("PMAPLAB_SEED from environment: %s", os.getenv("PMAPLAB_SEED", "not set"))


class LabSettings(BaseSettings):
    """
    Settings shared by the command line, the experiment catalog and the check suites.
    """

    seed: int = Field(20240101, ge=0, description="Master seed used when a command gives none")
    grid_log2: int = Field(
        14, ge=GRID_LOG2_MIN, le=GRID_LOG2_MAX, description="Limit paths live on 2**grid_log2 cells"
    )
    workers: int = Field(1, ge=1, description="Worker processes for replications")
    output_dir: Path = Field(Path("results"), description="Directory for CSV and JSON outputs")
    log_level: str = Field("INFO", description="Root logging level")
    enumeration_limit: int = Field(
        ENUMERATION_HARD_LIMIT,
        ge=1,
        le=ENUMERATION_HARD_LIMIT,
        description="Largest n accepted by exhaustive enumeration",
    )
    icrt_leaves: int = Field(2000, ge=1, description="Leaves used when an ICRT stands in a limit")
    tolerance: float = Field(1e-12, gt=0.0, description="Tolerance for floating comparisons")

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        env_prefix="PMAPLAB_",
        extra="ignore",
    )

    def __init__(self, **data: Any) -> None:
        super().__init__(**data)
        logger.info(
            "LabSettings initialized with seed: %s, grid_log2: %s", self.seed, self.grid_log2
        )

    @property
    def grid_size(self) -> int:
        """Number of grid cells for limit paths."""
        return 2**self.grid_log2
