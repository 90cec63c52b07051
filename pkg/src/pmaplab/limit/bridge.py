"""
Grid paths: the Brownian bridge, the exchangeable-increment bridge X^{br,theta}, the cyclic
shift at the minimum and the removal of jumps by reflection.

Paths are sampled at k/m, k = 0..m. A jump of size theta_i placed at grid index t means
X(t-) = X[t - 1] and X(t) = X[t].
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from pmaplab.core.errors import InvalidStructure, NonBridge, OutOfRange
from pmaplab.core.models import GridPathPayload, JumpPayload
from pmaplab.core.prob import ThetaVector
from pmaplab.core.rng import RngStream

# Setup logger
logger = logging.getLogger("bridge")

BRIDGE_TOLERANCE = 1e-9


@dataclass(frozen=True, eq=False)
class GridPath:
    """
    Values on the grid k/m with the jumps it carries as ``(index, size)`` pairs.
    """

    values: np.ndarray
    jumps: tuple[tuple[int, float], ...] = ()
    s_min: float = field(default=0.0)

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=np.float64)
        if values.ndim != 1 or values.size < 2 or not np.all(np.isfinite(values)):
            raise InvalidStructure("Grid path needs at least two finite values")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "jumps", tuple((int(i), float(s)) for i, s in self.jumps))

    @property
    def m(self) -> int:
        """Number of grid cells."""
        return int(self.values.size - 1)

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.m + 1) / self.m

    @classmethod
    def from_payload(cls, payload: GridPathPayload) -> "GridPath":
        if len(payload.values) != payload.m + 1:
            raise InvalidStructure(
                f"Grid path with m={payload.m} needs {payload.m + 1} values, "
                f"got {len(payload.values)}"
            )
        return cls(payload.values, tuple((jump.index, jump.size) for jump in payload.jumps))

    def to_payload(self) -> GridPathPayload:
        return GridPathPayload(
            m=self.m,
            values=[float(x) for x in self.values],
            jumps=[JumpPayload(index=i, size=s) for i, s in self.jumps],
        )


def brownian_bridge(m: int, rng: RngStream) -> GridPath:
    """Brownian bridge on m cells: a Gaussian walk W minus t * W(1)."""
    if m < 2:
        raise OutOfRange(f"Grid needs m >= 2 cells, got {m}")
    steps = rng.generator.normal(0.0, math.sqrt(1.0 / m), size=m)
    walk = np.concatenate(([0.0], np.cumsum(steps)))
    times = np.arange(m + 1) / m
    return GridPath(walk - times * walk[-1])


def _distinct_indices(indices: np.ndarray, m: int) -> np.ndarray:
    """Move colliding jump indices to the next free interior grid point."""
    used: set[int] = set()
    out = []
    for index in indices.tolist():
        while index in used:
            index = index + 1 if index < m - 1 else 1
        used.add(index)
        out.append(index)
    return np.asarray(out, dtype=np.int64)


def bridge_exchangeable(theta: ThetaVector, m: int, rng: RngStream) -> GridPath:
    """
    X^{br,theta}(s) = theta0 b(s) + sum_i theta_i (1{U_i <= s} - s).

    Jump times U_i are uniform and snapped to interior grid points.
    """
    bridge = brownian_bridge(m, rng.child(0))
    uniforms = rng.child(1).generator.random(theta.size)
    indices = _distinct_indices(np.clip(np.rint(uniforms * m).astype(np.int64), 1, m - 1), m)
    grid = np.arange(m + 1)
    times = grid / m
    values = theta.theta0 * bridge.values
    for index, size in zip(indices, theta.thetas):
        values = values + size * ((grid >= index).astype(np.float64) - times)
    values[-1] = 0.0
    return GridPath(values, tuple(zip(indices.tolist(), theta.thetas)))


def vervaat(path: GridPath) -> GridPath:
    """
    Cyclic shift starting at the leftmost minimum, recentred so the result starts at 0.
    """
    values = path.values
    if abs(values[0] - values[-1]) > BRIDGE_TOLERANCE:
        raise NonBridge(f"Path starts at {values[0]} and ends at {values[-1]}")
    m = path.m
    k_min = int(np.argmin(values[:-1]))
    shifted = np.roll(values[:-1], -k_min) - values[k_min]
    shifted = np.concatenate((shifted, [0.0]))
    jumps = tuple(((index - k_min) % m, size) for index, size in path.jumps)
    logger.debug("Vervaat shift at index %s of %s", k_min, m)
    return GridPath(shifted, jumps, s_min=k_min / m)


@dataclass(frozen=True, eq=False)
class Reflection:
    """
    Y = X - sum_i R_i with the absorption index T_i of every jump.
    """

    path: GridPath
    absorption: tuple[int, ...]
    reflections: np.ndarray


def jump_reflections(path: GridPath) -> Reflection:
    """
    Remove each jump by reflecting the path above the level X(t_i-) until it returns there.

    R_i(s) = inf_{[t_i, s]} X - X(t_i-) on [t_i, T_i), where T_i is the first grid index at or
    after t_i with X <= X(t_i-); T_i = m (time 1) when the level is never reached.
    """
    values = path.values
    m = path.m
    reflections = np.zeros((len(path.jumps), m + 1))
    absorption = []
    for row, (index, _) in enumerate(path.jumps):
        level = values[index - 1] if index > 0 else values[0]
        below = np.flatnonzero(values[index:] <= level)
        if below.size:
            stop = index + int(below[0])
        else:
            logger.warning("Jump at grid index %s never absorbed; using T = 1", index)
            stop = m
        running = np.minimum.accumulate(values[index : stop + 1]) - level
        reflections[row, index : stop + 1] = np.maximum(running, 0.0)
        absorption.append(stop)
    reflected = values - reflections.sum(axis=0)
    return Reflection(
        path=GridPath(reflected, path.jumps, s_min=path.s_min),
        absorption=tuple(absorption),
        reflections=reflections,
    )
