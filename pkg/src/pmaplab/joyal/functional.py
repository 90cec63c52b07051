"""
Pre-post infimum, generalized excursions and the Joyal rearrangement of a step function.

For a time u, the pre-post infimum is inf f over [s, u] before u and over [u, s] after it.
Its flat stretches cut [0, total] into generalized excursions: a stretch before u and one after
u at the same height form a single excursion in two pieces. The Joyal functional lays the
excursions, shifted down to their base height, side by side in order of increasing height.
"""

import logging
from dataclasses import dataclass

import numpy as np

from pmaplab.core.errors import HeightTie

from ..walks.step import StepFunction

# Setup logger
logger = logging.getLogger("joyal")

HEIGHT_TOLERANCE = 1e-12


@dataclass(frozen=True, eq=False)
class Excursion:
    """
    One generalized excursion: one or two step ranges ``[start, stop)`` at a common height.
    """

    steps: tuple[tuple[int, int], ...]
    intervals: tuple[tuple[float, float], ...]
    height: float
    length: float
    path: StepFunction

    @property
    def left(self) -> float:
        return self.intervals[0][0]


@dataclass(frozen=True, eq=False)
class ExcursionSet:
    """
    Generalized excursions of f at u, ranked by decreasing length.
    """

    u: float
    baseline: StepFunction
    items: tuple[Excursion, ...]

    @property
    def lengths(self) -> tuple[float, ...]:
        return tuple(item.length for item in self.items)


@dataclass(frozen=True, eq=False)
class JoyalOutput:
    """
    Rearranged path with its excursions in output order; g_i and d_i bound excursion i.
    """

    path: StepFunction
    excursions: tuple[Excursion, ...]

    @property
    def g(self) -> tuple[float, ...]:
        return self.path.marks["g"]

    @property
    def d(self) -> tuple[float, ...]:
        return self.path.marks["d"]

    @property
    def heights(self) -> tuple[float, ...]:
        return tuple(item.height for item in self.excursions)


def pre_post_infimum(f: StepFunction, u: float) -> StepFunction:
    """I_{f,u}: running infimum towards u from both sides."""
    j = f.step_index(u)
    values = f.values
    pre = np.minimum.accumulate(values[: j + 1][::-1])[::-1]
    post = np.minimum.accumulate(values[j:])
    return StepFunction(f.widths, np.concatenate((pre[:-1], post)), f.tags)


def _excursion(
    f: StepFunction, breaks: np.ndarray, ranges: list[tuple[int, int]], height: float
) -> Excursion:
    indices = np.concatenate([np.arange(start, stop) for start, stop in ranges])
    tags = None if f.tags is None else f.tags[indices]
    widths = f.widths[indices]
    return Excursion(
        steps=tuple(ranges),
        intervals=tuple((float(breaks[start]), float(breaks[stop])) for start, stop in ranges),
        height=height,
        length=float(np.sum(widths)),
        path=StepFunction(widths, f.values[indices] - height, tags),
    )


def generalized_excursions(
    f: StepFunction, u: float, baseline: StepFunction | None = None
) -> ExcursionSet:
    """
    Flat stretches of the baseline (the pre-post infimum unless given), pre and post pieces of
    equal height merged, ranked by decreasing length then left endpoint.
    """
    base = pre_post_infimum(f, u) if baseline is None else baseline
    j = f.step_index(u)
    levels = base.values
    cuts = np.flatnonzero(np.abs(np.diff(levels)) > HEIGHT_TOLERANCE) + 1
    starts = np.concatenate(([0], cuts))
    stops = np.concatenate((cuts, [levels.size]))

    pre = [(int(a), int(b)) for a, b in zip(starts, stops) if b <= j]
    pre_heights = np.array([levels[a] for a, _ in pre])
    merged_pre: set[int] = set()
    groups: list[tuple[list[tuple[int, int]], float]] = []
    for a, b in zip(starts, stops):
        a, b = int(a), int(b)
        if b <= j:
            continue
        height = float(levels[a])
        ranges = [(a, b)]
        if a > j and pre:
            k = int(np.argmin(np.abs(pre_heights - height)))
            if abs(pre_heights[k] - height) <= HEIGHT_TOLERANCE and k not in merged_pre:
                merged_pre.add(k)
                ranges = [pre[k], (a, b)]
                height = float(pre_heights[k])
        groups.append((ranges, height))
    groups.extend(
        ([run], float(levels[run[0]])) for k, run in enumerate(pre) if k not in merged_pre
    )

    breaks = f.breakpoints()
    items = [_excursion(f, breaks, ranges, height) for ranges, height in groups]
    items.sort(key=lambda item: (-item.length, item.left))
    return ExcursionSet(u=u, baseline=base, items=tuple(items))


def rearrange(excursions: ExcursionSet, allow_ties: bool = True) -> JoyalOutput:
    """Concatenate the excursions by increasing height, ties by left endpoint."""
    ordered = sorted(excursions.items, key=lambda item: (item.height, item.left))
    heights = np.array([item.height for item in ordered])
    if not allow_ties and np.any(np.diff(heights) <= HEIGHT_TOLERANCE):
        raise HeightTie("Two generalized excursions share a height")
    lengths = np.array([item.length for item in ordered])
    ends = np.cumsum(lengths)
    path = StepFunction.concat([item.path for item in ordered]).with_marks(
        g=ends - lengths, d=ends
    )
    logger.debug("Rearranged %s generalized excursions", len(ordered))
    return JoyalOutput(path=path, excursions=tuple(ordered))


def joyal_functional(f: StepFunction, u: float, allow_ties: bool = True) -> JoyalOutput:
    """Joyal rearrangement of f around u."""
    return rearrange(generalized_excursions(f, u), allow_ties)
