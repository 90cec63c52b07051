"""
Piecewise linear time changes between walks of the same tree under different weights.
"""

import logging
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from pmaplab.core.errors import InconsistentOrder
from pmaplab.core.prob import weight_vector

from .height import Weights
from .step import StepFunction

# Setup logger
logger = logging.getLogger("timechange")


@dataclass(frozen=True, eq=False)
class TimeChange:
    """
    Increasing piecewise linear map with S(knots[i]) = levels[i].
    """

    knots: np.ndarray
    levels: np.ndarray

    def __call__(self, s: float | np.ndarray) -> np.ndarray:
        return np.interp(s, self.knots, self.levels)

    def inverse(self, t: float | np.ndarray) -> np.ndarray:
        return np.interp(t, self.levels, self.knots)


def time_change(order: Sequence[int], w: Weights) -> TimeChange:
    """
    S_w for a walk visiting ``order``: S_w(w(v_1) + ... + w(v_i)) = i / n.
    """
    n = len(order)
    weights = weight_vector(w, n)
    if sorted(order) != list(range(n)):
        raise InconsistentOrder("Time change order must list every vertex once")
    knots = np.concatenate(([0.0], np.cumsum(weights[list(order)])))
    levels = np.arange(n + 1, dtype=np.float64) / n
    return TimeChange(knots, levels)


def compose(walk: StepFunction, s_p: TimeChange, s_w: TimeChange) -> StepFunction:
    """
    H o S_p^{-1} o S_w: the walk re-timed from p-widths to w-widths.

    A breakpoint or mark b of ``walk`` moves to S_w^{-1}(S_p(b)).
    """
    moved = s_w.inverse(s_p(walk.breakpoints()))
    marks = {k: tuple(s_w.inverse(s_p(np.asarray(v)))) for k, v in walk.marks.items()}
    return replace(walk, widths=np.diff(moved), marks=marks)


def uniform_time(s_p: TimeChange, s_w: TimeChange, u: float) -> float:
    """U^w = S_w^{-1}(S_p(u)); lands in the same vertex's step as u."""
    return float(s_w.inverse(s_p(u)))
