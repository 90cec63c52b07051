"""
Edge-weighted rooted trees with labelled leaves, the common currency of the ICRT module.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from functools import cached_property

import numpy as np

from pmaplab.core.errors import InvalidStructure, UnknownVertex
from pmaplab.core.models import EdgeTreePayload, NodePayload

# Setup logger
logger = logging.getLogger("icrt")

ROOT_LABEL = "root"


class NodeKind(str, Enum):
    """
    Role of a node.
    """

    ROOT = "root"
    LEAF = "leaf"
    HUB = "hub"
    INTERNAL = "internal"


def leaf_label(k: int) -> str:
    """Label of the k-th leaf, ``"k+"``."""
    return f"{k}+"


@dataclass(frozen=True, eq=False)
class EdgeTree:
    """
    Rooted tree on nodes 0..N-1 (node 0 is the root) with the length of every parent edge.
    """

    parent: tuple[int, ...]
    lengths: tuple[float, ...]
    labels: tuple[str, ...]
    kinds: tuple[NodeKind, ...]

    def __post_init__(self) -> None:
        size = len(self.parent)
        if not size or not len(self.lengths) == len(self.labels) == len(self.kinds) == size:
            raise InvalidStructure("Edge tree fields must describe the same nodes")
        if self.parent[0] != -1 or any(not 0 <= a < size for a in self.parent[1:]):
            raise InvalidStructure("Node 0 must be the only root")
        if any(length < 0.0 for length in self.lengths):
            raise InvalidStructure("Edge lengths must be non-negative")
        if len(self.depth_order) != size:
            raise InvalidStructure("Edge tree is not connected")

    @property
    def size(self) -> int:
        return len(self.parent)

    @cached_property
    def children(self) -> list[list[int]]:
        kids: list[list[int]] = [[] for _ in range(self.size)]
        for v, a in enumerate(self.parent[1:], start=1):
            kids[a].append(v)
        return kids

    @cached_property
    def depth_order(self) -> tuple[int, ...]:
        """Nodes ordered so that parents come before children."""
        order = [0]
        for v in order:
            order.extend(self.children[v])
        return tuple(order)

    @cached_property
    def heights(self) -> np.ndarray:
        """Distance of every node to the root."""
        heights = np.zeros(self.size)
        for v in self.depth_order[1:]:
            heights[v] = heights[self.parent[v]] + self.lengths[v]
        return heights

    @property
    def total_length(self) -> float:
        return float(sum(self.lengths))

    def node(self, label: str) -> int:
        """Node carrying ``label``."""
        try:
            return self.labels.index(label)
        except ValueError as e:
            raise UnknownVertex(f"No node labelled {label!r}") from e

    def leaf_heights(self) -> dict[str, float]:
        """Root distance of every labelled leaf."""
        return {
            label: float(self.heights[v])
            for v, label in enumerate(self.labels)
            if self.kinds[v] == NodeKind.LEAF
        }

    def ancestors(self, v: int) -> list[int]:
        """v and its ancestors up to the root."""
        path = [v]
        while path[-1] != 0:
            path.append(self.parent[path[-1]])
        return path

    def distance(self, u: int, v: int) -> float:
        """Length of the path between two nodes."""
        above_u = set(self.ancestors(u))
        meet = next(a for a in self.ancestors(v) if a in above_u)
        return float(self.heights[u] + self.heights[v] - 2.0 * self.heights[meet])

    def to_payload(self) -> EdgeTreePayload:
        return EdgeTreePayload(
            nodes=[NodePayload(id=v, label=label) for v, label in enumerate(self.labels)],
            edges=[(self.parent[v], v, self.lengths[v]) for v in range(1, self.size)],
        )
