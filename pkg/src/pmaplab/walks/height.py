"""
Depth-first order and height walks of plane trees and of mappings.

The depth-first order starts at the root and moves to the oldest unvisited child, else to the
oldest unvisited younger sibling of the nearest ancestor that has one. Step i of a height walk
has width w(v_i) and value ht(v_i).
"""

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from pmaplab.core.errors import InconsistentOrder
from pmaplab.core.prob import RankedProb, weight_vector
from pmaplab.discrete.basins import BasinDecomposition
from pmaplab.discrete.mapping import Mapping
from pmaplab.discrete.tree import PlaneTree

from .step import StepFunction

# Setup logger
logger = logging.getLogger("height")

Weights = RankedProb | np.ndarray | Sequence[float]


def preorder(children: Sequence[Sequence[int]], root: int) -> tuple[list[int], list[int]]:
    """Depth-first order below ``root`` and the depth of every visited vertex."""
    order: list[int] = []
    depths: list[int] = []
    stack = [(root, 0)]
    while stack:
        v, depth = stack.pop()
        order.append(v)
        depths.append(depth)
        stack.extend((c, depth + 1) for c in reversed(children[v]))
    return order, depths


def depth_first(pt: PlaneTree) -> tuple[int, ...]:
    """Vertices of a plane tree in depth-first order, root first."""
    return tuple(preorder(pt.children, pt.root)[0])


def tree_height_walk(pt: PlaneTree, w: Weights) -> StepFunction:
    """Height walk H^T_w of a plane tree."""
    weights = weight_vector(w, pt.n)
    order, depths = preorder(pt.children, pt.root)
    return StepFunction(weights[order], np.asarray(depths, dtype=np.float64), np.asarray(order))


@dataclass(frozen=True, eq=False)
class WalkMarks:
    """
    Basin ends D_1 < ... < D_k and the cyclic-point counting function ell.
    """

    basin_ends: tuple[float, ...]
    ell: StepFunction


def cyclic_count_walk(walk: StepFunction) -> StepFunction:
    """ell(s): number of height-zero steps started at or before s, counting inclusively."""
    return StepFunction(walk.widths, np.cumsum(walk.values == 0.0).astype(np.float64), walk.tags)


def mapping_walk(
    m: Mapping,
    ordered: BasinDecomposition,
    plane_orders: Sequence[Sequence[int]],
    w: Weights,
) -> tuple[StepFunction, WalkMarks]:
    """
    Height walk H^m_w: the walks of the trees T_c concatenated along the cyclic order.

    ``plane_orders`` gives the ordered children of every vertex inside the forest {T_c}.
    """
    if ordered.mapping.key() != m.key():
        raise InconsistentOrder("Ordered decomposition belongs to another mapping")
    if len(plane_orders) != m.n or any(
        sorted(kids) != list(expected)
        for kids, expected in zip(plane_orders, ordered.raw.forest_children)
    ):
        raise InconsistentOrder("Plane orders do not match the tree components of the mapping")
    weights = weight_vector(w, m.n)
    order: list[int] = []
    depths: list[int] = []
    for c in ordered.cyclic_linear_order:
        component, component_depths = preorder(plane_orders, c)
        order.extend(component)
        depths.extend(component_depths)
    walk = StepFunction(weights[order], np.asarray(depths, dtype=np.float64), np.asarray(order))
    basin_ends = tuple(float(x) for x in np.cumsum(ordered.basin_masses(weights)))
    walk = walk.with_marks(D=basin_ends)
    logger.debug("Mapping walk with %s basins", len(basin_ends))
    return walk, WalkMarks(basin_ends=basin_ends, ell=cyclic_count_walk(walk))
