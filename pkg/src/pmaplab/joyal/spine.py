"""
The spine from the root to X_1 and the modified Joyal functional built on it.

With spine c_1 (root), ..., c_K = X_1, the tree T_{c_k} collects the descendants of c_k that do
not descend from c_{k+1}. The spine-lifted baseline is the pre-u infimum raised by one on the
spine steps and, after u, the running infimum of the walk with the step of X_1 raised by one.
Its flat stretch at height k covers exactly the steps of T_{c_k}, so rearranging the stretches
reproduces the mapping walk minus one.
"""

import logging
from dataclasses import dataclass

import numpy as np

from pmaplab.core.errors import SpineMismatch
from pmaplab.discrete.tree import RootedTree

from ..walks.step import StepFunction
from .functional import generalized_excursions, rearrange

# Setup logger
logger = logging.getLogger("spine")


@dataclass(frozen=True, eq=False)
class Spine:
    """
    Path c_1 = root, ..., c_K = X_1 and, per vertex, the index k of the tree T_{c_k} holding it.
    """

    vertices: tuple[int, ...]
    owner: np.ndarray

    @property
    def end(self) -> int:
        return self.vertices[-1]

    def __len__(self) -> int:
        return len(self.vertices)


def spine_of(t: RootedTree, x1: int) -> Spine:
    """Spine of t towards ``x1``."""
    vertices = tuple(reversed(t.path_to_root(x1)))
    position = np.full(t.n, -1, dtype=np.int64)
    position[list(vertices)] = np.arange(len(vertices))
    owner = np.zeros(t.n, dtype=np.int64)
    for v in t.breadth_first[1:]:
        owner[v] = position[v] if position[v] >= 0 else owner[t.parent[v]]
    return Spine(vertices=vertices, owner=owner)


def spine_lift(walk: StepFunction, u: float, spine: Spine) -> StepFunction:
    """Spine-lifted baseline K of a tree height walk at time u."""
    if walk.tags is None or walk.tag_at(u) != spine.end:
        raise SpineMismatch(f"Vertex visited at u={u} is not the spine end {spine.end}")
    j = walk.step_index(u)
    values = walk.values
    on_spine = np.isin(walk.tags[: j + 1], spine.vertices)
    pre = np.minimum.accumulate(values[: j + 1][::-1])[::-1] + on_spine
    after = values[j:].copy()
    after[0] += 1.0
    post = np.minimum.accumulate(after)
    return StepFunction(walk.widths, np.concatenate((pre[:-1], post)), walk.tags)


def joyal_tilde(walk: StepFunction, u: float, spine: Spine) -> StepFunction:
    """
    Modified Joyal functional: excursions of the walk above the spine-lifted baseline, laid
    out by increasing base height.
    """
    baseline = spine_lift(walk, u, spine)
    output = rearrange(generalized_excursions(walk, u, baseline))
    logger.debug("Spine of length %s gave %s excursions", len(spine), len(output.excursions))
    return output.path
