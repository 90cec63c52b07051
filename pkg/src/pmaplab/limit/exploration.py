"""
Height process H^theta of the ICRT, the limit mapping walk Z^theta and its basin marks.

H^theta = 2 / theta0^2 * Y where Y removes the jumps of the Vervaat-shifted bridge
X^theta by reflection. Z^theta is the Joyal rearrangement of H^theta at an independent uniform
time; its excursion ends d_i carry the marks D_1 < D_2 < ... and its local time is the height
of the straddling excursion.
"""

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from pmaplab.core.errors import DegenerateTheta
from pmaplab.core.prob import ThetaVector
from pmaplab.core.rng import RngStream

from ..joyal.functional import JoyalOutput, joyal_functional
from ..walks.step import StepFunction
from .bridge import GridPath, Reflection, bridge_exchangeable, jump_reflections, vervaat

# Setup logger
logger = logging.getLogger("exploration")

END_TOLERANCE = 1e-12


@dataclass(frozen=True, eq=False)
class Exploration:
    """
    Every stage of the height process construction.
    """

    bridge: GridPath
    excursion: GridPath
    reflection: Reflection
    height: GridPath


def exploration_stages(theta: ThetaVector, m: int, rng: RngStream) -> Exploration:
    """Bridge, Vervaat shift, reflection and scaling on a grid of m cells."""
    theta0 = theta.theta0
    if theta0 <= 0.0:
        raise DegenerateTheta("Brownian weight theta0 must be positive")
    bridge = bridge_exchangeable(theta, m, rng)
    excursion = vervaat(bridge)
    reflection = jump_reflections(excursion)
    scaled = reflection.path.values * (2.0 / theta0**2)
    height = GridPath(scaled, excursion.jumps, s_min=excursion.s_min)
    return Exploration(bridge=bridge, excursion=excursion, reflection=reflection, height=height)


def exploration(theta: ThetaVector, m: int, rng: RngStream) -> GridPath:
    """Height process H^theta on a grid of m cells."""
    return exploration_stages(theta, m, rng).height


def grid_step_function(path: GridPath) -> StepFunction:
    """Step function equal to path[k] on the cell [k/m, (k+1)/m)."""
    m = path.m
    return StepFunction(np.full(m, 1.0 / m), path.values[:-1])


@dataclass(frozen=True, eq=False)
class LimitZ:
    """
    Z^theta with the uniform time it was built around.
    """

    output: JoyalOutput
    u: float

    @property
    def path(self) -> StepFunction:
        return self.output.path


def limit_Z(height: GridPath, rng: RngStream, u: float | None = None) -> LimitZ:
    """Joyal rearrangement of the height process around a uniform time."""
    time = rng.random() if u is None else u
    output = joyal_functional(grid_step_function(height), time)
    logger.debug("Z built at u=%s from %s excursions", time, len(output.excursions))
    return LimitZ(output=output, u=time)


def local_time(z: LimitZ) -> StepFunction:
    """L: height h_i of the excursion straddling s, non-decreasing in s."""
    output = z.output
    lengths = np.array([item.length for item in output.excursions])
    return StepFunction(lengths, np.asarray(output.heights))


def marks_D(
    d_list: Sequence[float],
    rng: RngStream,
    k: int,
    uniforms: Sequence[float] | None = None,
) -> tuple[float, ...]:
    """
    D_n = min{d in d_list : d > D_{n-1} + V_n (1 - D_{n-1})}; D_n = 1 ends the sequence.

    ``uniforms`` replaces the draws V_n when given.
    """
    ends = np.asarray(d_list, dtype=np.float64)
    marks: list[float] = []
    previous = 0.0
    for step in range(k):
        v = rng.random() if uniforms is None else float(uniforms[step])
        threshold = previous + v * (1.0 - previous)
        index = int(np.searchsorted(ends, threshold, side="right"))
        mark = float(ends[index]) if index < ends.size else 1.0
        marks.append(mark)
        if mark >= 1.0 - END_TOLERANCE:
            break
        previous = mark
    return tuple(marks)


def limit_basin_stats(z: LimitZ, marks: Sequence[float]) -> list[tuple[float, float]]:
    """
    (D_j - D_{j-1}, L(D_j) - L(D_{j-1})) with D_0 = 0 and L(D_j) the height of the excursion
    ending at D_j.
    """
    ends = np.asarray(z.output.d)
    heights = np.asarray(z.output.heights)
    stats = []
    previous_mark, previous_level = 0.0, 0.0
    for mark in marks:
        index = min(int(np.searchsorted(ends, mark - END_TOLERANCE)), ends.size - 1)
        level = float(heights[index])
        stats.append((mark - previous_mark, level - previous_level))
        previous_mark, previous_level = mark, level
    return stats


def excursion_subintervals(
    height: GridPath, start: int, stop: int
) -> list[tuple[float, float]]:
    """
    Maximal intervals inside (start/m, stop/m) where the path stays above its value at
    ``start``, longest first.
    """
    m = height.m
    inside = height.values[start + 1 : stop] > height.values[start]
    edges = np.diff(np.concatenate(([0], inside.astype(np.int8), [0])))
    firsts = np.flatnonzero(edges == 1) + start + 1
    lasts = np.flatnonzero(edges == -1) + start
    intervals = [((a - 1) / m, (b + 1) / m) for a, b in zip(firsts, lasts)]
    intervals.sort(key=lambda pair: (pair[0] - pair[1], pair[0]))
    return intervals


def path_pseudo_distance(height: GridPath, u: float, v: float) -> float:
    """H(u) + H(v) - 2 inf_{[u, v]} H, read at the nearest grid points."""
    m = height.m
    i, j = sorted((int(round(u * m)), int(round(v * m))))
    values = height.values
    return float(values[i] + values[j] - 2.0 * values[i : j + 1].min())
