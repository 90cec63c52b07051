"""
Right-continuous step functions on [0, total] and distances between them.
"""

import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Mapping, Sequence

import numpy as np

from pmaplab.core.errors import InvalidStructure, OutOfRange
from pmaplab.core.models import StepFunctionPayload

# Setup logger
logger = logging.getLogger("step")

NO_TAG = -1
BOUNDARY_TOLERANCE = 1e-12


class DistanceMode(str, Enum):
    """
    Path distances.
    """

    UNIFORM = "uniform"
    SPIKE_STRIPPED = "spike_stripped"


@dataclass(frozen=True, eq=False)
class StepFunction:
    """
    Piecewise constant function; step i has width ``widths[i]`` and value ``values[i]``.

    ``tags`` records which vertex a step shows (``NO_TAG`` for filler) and ``marks`` carries
    named times such as the basin ends D or the excursion ends g, d.
    """

    widths: np.ndarray
    values: np.ndarray
    tags: np.ndarray | None = None
    marks: Mapping[str, tuple[float, ...]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        widths = np.array(self.widths, dtype=np.float64)
        values = np.array(self.values, dtype=np.float64)
        if widths.ndim != 1 or widths.shape != values.shape:
            raise InvalidStructure("Widths and values must be 1-D arrays of equal length")
        if np.any(widths <= 0.0):
            raise InvalidStructure("Step widths must be positive")
        widths.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "widths", widths)
        object.__setattr__(self, "values", values)
        if self.tags is not None:
            tags = np.array(self.tags, dtype=np.int64)
            if tags.shape != widths.shape:
                raise InvalidStructure("Tags must match the steps")
            tags.setflags(write=False)
            object.__setattr__(self, "tags", tags)
        object.__setattr__(
            self, "marks", {k: tuple(float(t) for t in v) for k, v in self.marks.items()}
        )

    @classmethod
    def from_payload(cls, payload: StepFunctionPayload) -> "StepFunction":
        tags = None if payload.tags is None else np.asarray(payload.tags) - 1
        return cls(payload.widths, payload.values, tags, payload.marks)

    def to_payload(self) -> StepFunctionPayload:
        return StepFunctionPayload(
            widths=[float(x) for x in self.widths],
            values=[float(x) for x in self.values],
            tags=None if self.tags is None else [int(t) + 1 for t in self.tags],
            marks={k: list(v) for k, v in self.marks.items()},
        )

    def __len__(self) -> int:
        return int(self.widths.size)

    @property
    def total(self) -> float:
        """Length of the domain."""
        return float(self.breakpoints()[-1]) if len(self) else 0.0

    def breakpoints(self) -> np.ndarray:
        """Step boundaries 0 = b_0 < b_1 < ... < b_k = total."""
        return np.concatenate(([0.0], np.cumsum(self.widths)))

    def step_index(self, t: float) -> int:
        """Index of the step containing t; a boundary belongs to the step on its right."""
        total = self.total
        if t < 0.0 or t > total + BOUNDARY_TOLERANCE:
            raise OutOfRange(f"Time {t} outside [0, {total}]")
        index = int(np.searchsorted(self.breakpoints(), t, side="right")) - 1
        return min(max(index, 0), len(self) - 1)

    def evaluate(self, t: float | np.ndarray) -> float | np.ndarray:
        """Value at t (right-continuous; the last value at t = total)."""
        if np.ndim(t) == 0:
            return float(self.values[self.step_index(float(t))])
        indices = np.searchsorted(self.breakpoints(), t, side="right") - 1
        return self.values[np.clip(indices, 0, len(self) - 1)]

    def tag_at(self, t: float) -> int:
        """Vertex shown at time t."""
        if self.tags is None:
            raise InvalidStructure("Step function carries no vertex tags")
        return int(self.tags[self.step_index(t)])

    def shifted(self, offset: float) -> "StepFunction":
        """Same steps with every value moved by ``offset``."""
        return replace(self, values=self.values + offset)

    def with_marks(self, **marks: Sequence[float]) -> "StepFunction":
        return replace(self, marks={**self.marks, **{k: tuple(v) for k, v in marks.items()}})

    def restrict(self, start: int, stop: int) -> "StepFunction":
        """Steps ``start`` to ``stop - 1`` as a function on [0, their total width]."""
        if not 0 <= start < stop <= len(self):
            raise OutOfRange(f"Step range [{start}, {stop}) outside [0, {len(self)})")
        tags = None if self.tags is None else self.tags[start:stop]
        return StepFunction(self.widths[start:stop], self.values[start:stop], tags)

    @classmethod
    def concat(cls, parts: Sequence["StepFunction"]) -> "StepFunction":
        """Run the parts one after another."""
        if not parts:
            raise InvalidStructure("Nothing to concatenate")
        tagged = all(part.tags is not None for part in parts)
        return cls(
            np.concatenate([part.widths for part in parts]),
            np.concatenate([part.values for part in parts]),
            np.concatenate([part.tags for part in parts if part.tags is not None])
            if tagged
            else None,
        )


def _refinement(f: StepFunction, g: StepFunction) -> np.ndarray:
    """Boundaries of the common refinement of both partitions."""
    points = np.union1d(f.breakpoints(), g.breakpoints())
    keep = np.concatenate(([True], np.diff(points) > BOUNDARY_TOLERANCE))
    points = points[keep]
    points[-1] = max(f.total, g.total)
    return points


def _strip_highest(h: StepFunction, eps: float) -> tuple[np.ndarray, np.ndarray]:
    """
    Values at the left and right end of every step once the highest steps of total width at
    most ``eps`` are replaced by the straight line between their retained neighbours.
    """
    left, right = h.values.copy(), h.values.copy()
    order = np.argsort(-h.values, kind="stable")
    fits = np.cumsum(h.widths[order]) <= eps + BOUNDARY_TOLERANCE
    stripped = np.zeros(len(h), dtype=bool)
    stripped[order[fits]] = True
    if not stripped.any():
        return left, right
    if stripped.all():
        floor = float(h.values.min())
        return np.full(len(h), floor), np.full(len(h), floor)
    bounds = h.breakpoints()
    edges = np.diff(np.concatenate(([0], stripped.astype(np.int8), [0])))
    for first, stop in zip(np.flatnonzero(edges == 1), np.flatnonzero(edges == -1)):
        before = h.values[first - 1] if first > 0 else h.values[stop]
        after = h.values[stop] if stop < len(h) else before
        start, end = bounds[first], bounds[stop]
        slope = (after - before) / (end - start)
        left[first:stop] = before + slope * (bounds[first:stop] - start)
        right[first:stop] = before + slope * (bounds[first + 1 : stop + 1] - start)
    return left, right


def _cell_values(
    h: StepFunction, ends: tuple[np.ndarray, np.ndarray], points: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Values of the stripped path at the left and right end of every refined cell."""
    left, right = ends
    mids = 0.5 * (points[:-1] + points[1:])
    index = np.clip(np.searchsorted(h.breakpoints(), mids, side="right") - 1, 0, len(h) - 1)
    start = h.breakpoints()[index]
    slope = (right[index] - left[index]) / h.widths[index]
    return left[index] + slope * (points[:-1] - start), left[index] + slope * (points[1:] - start)


def path_distance(
    f: StepFunction,
    g: StepFunction,
    mode: DistanceMode = DistanceMode.UNIFORM,
    eps: float = 0.0,
) -> float:
    """
    Distance between two step functions on the same interval.

    ``UNIFORM`` is the sup of |f - g|. ``SPIKE_STRIPPED`` first replaces, in each path, its
    highest-valued steps of total width at most ``eps`` by linear interpolation between the
    neighbouring steps, then takes the sup of the difference of the two modified paths.
    """
    if abs(f.total - g.total) > 1e-9:
        raise OutOfRange(f"Paths live on [0, {f.total}] and [0, {g.total}]")
    points = _refinement(f, g)
    if mode == DistanceMode.UNIFORM or eps <= 0.0:
        mids = 0.5 * (points[:-1] + points[1:])
        return float(np.abs(np.asarray(f.evaluate(mids)) - np.asarray(g.evaluate(mids))).max())
    f_left, f_right = _cell_values(f, _strip_highest(f, eps), points)
    g_left, g_right = _cell_values(g, _strip_highest(g, eps), points)
    # both paths are affine on every cell, so the sup sits at a cell end
    return float(max(np.abs(f_left - g_left).max(), np.abs(f_right - g_right).max()))
