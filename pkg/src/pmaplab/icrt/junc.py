"""
Branchpoints with the root-to-1+ path and the basin statistics they induce.
"""

import logging
from dataclasses import dataclass

import numpy as np

from pmaplab.core.errors import OutOfRange
from pmaplab.core.prob import ThetaVector
from pmaplab.core.rng import RngStream

from .stick import StickBreaking, sample_stick_breaking

# Setup logger
logger = logging.getLogger("junc")


@dataclass(frozen=True)
class JuncStats:
    """
    Per basin j: leaf fraction with junc in ]]c_{j-1}, c_j]] and ht(c_j) - ht(c_{j-1}).
    """

    masses: tuple[float, ...]
    height_increments: tuple[float, ...]
    levels: tuple[float, ...]


def junc_heights(sticks: StickBreaking) -> np.ndarray:
    """
    Height of junc(k+) for k = 2..J (index k - 2).

    Segment 1 is the path root -> 1+, so a height on it identifies the branchpoint.
    """
    attachment = sticks.attachment()
    meet = np.zeros(sticks.leaves + 1)
    for k in range(2, sticks.leaves + 1):
        segment = int(attachment[k - 2])
        meet[k] = sticks.joinpoints[k - 2] if segment == 1 else meet[segment]
    return meet[2:]


def basin_levels(juncs: np.ndarray, k_basins: int | None = None) -> JuncStats:
    """
    Run c_{j+1} = junc of the first leaf whose junc lies above c_j, over leaves in index order.
    """
    total = juncs.size
    masses, increments, levels = [], [], []
    level = 0.0
    while k_basins is None or len(levels) < k_basins:
        above = np.flatnonzero(juncs > level)
        if not above.size:
            break
        new_level = float(juncs[above[0]])
        count = np.count_nonzero((juncs > level) & (juncs <= new_level))
        masses.append(count / total)
        increments.append(new_level - level)
        levels.append(new_level)
        level = new_level
    return JuncStats(
        masses=tuple(masses), height_increments=tuple(increments), levels=tuple(levels)
    )


def icrt_junc_stats(
    theta: ThetaVector, leaves: int, k_basins: int | None, rng: RngStream
) -> JuncStats:
    """Basin masses and height increments of T^theta_J; masses are fractions of leaves 2+..J+."""
    if leaves < 2:
        raise OutOfRange(f"Junc statistics need J >= 2 leaves, got {leaves}")
    stats = basin_levels(junc_heights(sample_stick_breaking(theta, leaves, rng)), k_basins)
    logger.debug("Junc recursion found %s basins", len(stats.levels))
    return stats
