"""
Joyal correspondence from (tree, X_1, q-sample) to a mapping, and the coupled walk identity.
"""

import logging
from dataclasses import dataclass

import numpy as np

from pmaplab.core.prob import RankedProb, weight_vector
from pmaplab.core.rng import RngStream
from pmaplab.discrete.basins import (
    BasinDecomposition,
    QSampler,
    basin_decomposition,
    order_from_selection,
)
from pmaplab.discrete.mapping import Mapping
from pmaplab.discrete.tree import PlaneTree, RootedTree

from ..walks.height import Weights, depth_first, mapping_walk, tree_height_walk
from ..walks.step import StepFunction
from ..walks.timechange import time_change, uniform_time
from .spine import Spine, joyal_tilde, spine_of

# Setup logger
logger = logging.getLogger("correspondence")


def joyal_correspondence(
    t: RootedTree, x1: int, q: Weights, rng: RngStream
) -> tuple[Mapping, BasinDecomposition]:
    """
    Bind consecutive spine trees into cycles as an i.i.d. q-sample X_2, X_3, ... hits them.

    A sample landing in T_{c_k} outside the trees already bound closes the cycle
    c_{a} -> ... -> c_{k} -> c_{a} over the first unbound spine index a. The basins come out
    in q-biased order.
    """
    weights = weight_vector(q, t.n)
    spine = spine_of(t, x1)
    image = t.parent.copy()
    selected: list[int] = []
    tau: list[int] = []
    bound = 0
    samples = iter(QSampler(weights, rng))
    while bound < len(spine):
        index, x = next(samples)
        k = int(spine.owner[x])
        if k < bound:
            continue
        group = spine.vertices[bound : k + 1]
        image[list(group)] = np.roll(group, -1)
        selected.append(group[-1])
        tau.append(index)
        bound = k + 1
    mapping = Mapping(image)
    logger.debug("Joyal correspondence bound %s spine trees into %s cycles", len(spine), len(tau))
    return mapping, order_from_selection(basin_decomposition(mapping), selected, tau)


def forest_plane_orders(pt: PlaneTree, spine: Spine) -> tuple[tuple[int, ...], ...]:
    """Plane orders of the trees T_{c_k}: the plane tree's orders with spine children removed."""
    on_spine = set(spine.vertices)
    return tuple(tuple(c for c in kids if c not in on_spine) for kids in pt.children)


@dataclass(frozen=True, eq=False)
class LemmaInstance:
    """
    Both sides of the walk identity for one coupled draw.
    """

    tilde: StepFunction
    walk_minus_one: StepFunction
    mapping: Mapping
    decomposition: BasinDecomposition
    x1: int
    u_w: float

    def holds(self, tolerance: float = 1e-12) -> bool:
        """Whether both sides agree step by step: vertex, value and width."""
        left, right = self.tilde, self.walk_minus_one
        if len(left) != len(right) or left.tags is None or right.tags is None:
            return False
        return bool(
            np.array_equal(left.tags, right.tags)
            and np.array_equal(left.values, right.values)
            and np.allclose(left.widths, right.widths, rtol=0.0, atol=tolerance)
        )


def lemma_instance(
    pt: PlaneTree,
    p: RankedProb,
    w: Weights,
    u: float,
    q: Weights,
    rng: RngStream,
) -> LemmaInstance:
    """
    Visit X_1 at U^w = S_w^{-1}(S_p(u)), apply the modified Joyal functional and build the
    Joyal mapping from the same tree, X_1 and q-stream.
    """
    weights = weight_vector(w, pt.n)
    order = depth_first(pt)
    u_w = uniform_time(time_change(order, p), time_change(order, weights), u)
    walk = tree_height_walk(pt, weights)
    x1 = walk.tag_at(u_w)
    spine = spine_of(pt.tree, x1)
    tilde = joyal_tilde(walk, u_w, spine)
    mapping, decomposition = joyal_correspondence(pt.tree, x1, q, rng)
    mapping_path, _ = mapping_walk(mapping, decomposition, forest_plane_orders(pt, spine), weights)
    return LemmaInstance(
        tilde=tilde,
        walk_minus_one=mapping_path.shifted(-1.0),
        mapping=mapping,
        decomposition=decomposition,
        x1=x1,
        u_w=u_w,
    )
