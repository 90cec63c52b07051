"""
Stick-breaking construction of the tree T^theta_J.

Cutpoints and joinpoints come from independent point processes on [0, inf): an octant process
of rate theta0^2 u du dv on {0 < v < u}, whose point (U_j, V_j) cuts at U_j and joins at V_j,
and for each hub i a Poisson process of rate theta_i whose first point xi_{i,1} is the joinpoint
of every later point xi_{i,j}. Ordered cutpoints eta_1 < eta_2 < ... cut [0, inf) into segments;
segment k = (eta_{k-1}, eta_k] is glued at the joinpoint eta*_{k-1} paired with eta_{k-1} and
ends at leaf k+.
"""

import heapq
import itertools
import logging
import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from pmaplab.core.errors import DegenerateTheta, OutOfRange
from pmaplab.core.prob import ThetaVector
from pmaplab.core.rng import RngStream

from .tree import ROOT_LABEL, EdgeTree, NodeKind, leaf_label

# Setup logger
logger = logging.getLogger("stick")

OCTANT = 0

Cut = tuple[float, float, int]


def _octant_cuts(theta0: float, generator: np.random.Generator) -> Iterator[Cut]:
    """Points (U, V) of the octant process in increasing U; Lambda(u) = theta0^2 u^2 / 2."""
    gamma = 0.0
    while True:
        gamma += generator.exponential()
        u = math.sqrt(2.0 * gamma) / theta0
        yield u, generator.uniform(0.0, u), OCTANT


def _hub_cuts(hub: int, rate: float, generator: np.random.Generator) -> Iterator[Cut]:
    """Points xi_{i,2}, xi_{i,3}, ... of hub ``hub`` paired with the joinpoint xi_{i,1}."""
    first = generator.exponential(1.0 / rate)
    position = first
    while True:
        position += generator.exponential(1.0 / rate)
        yield position, first, hub


@dataclass(frozen=True, eq=False)
class StickBreaking:
    """
    The first J cutpoints with their joinpoints.

    ``sources[k]`` is 0 when cutpoint k + 1 came from the octant process and the 1-based hub
    index otherwise; it also tells where the joinpoint of segment k + 2 came from.
    """

    theta: ThetaVector
    cutpoints: np.ndarray
    joinpoints: np.ndarray
    sources: tuple[int, ...]

    @property
    def leaves(self) -> int:
        return int(self.cutpoints.size)

    def segment_of(self, positions: np.ndarray) -> np.ndarray:
        """1-based segment holding each position, i.e. the first k with eta_k >= position."""
        return np.searchsorted(self.cutpoints, positions, side="left") + 1

    def attachment(self) -> np.ndarray:
        """Segment holding the joinpoint of segment k, for k = 2..J (index k - 2)."""
        return self.segment_of(self.joinpoints[: self.leaves - 1])

    def to_edge_tree(self) -> EdgeTree:
        """Glue the segments into T^theta_J."""
        leaves = self.leaves
        cuts = self.cutpoints
        labels = [ROOT_LABEL] + [leaf_label(k) for k in range(1, leaves + 1)]
        kinds = [NodeKind.ROOT] + [NodeKind.LEAF] * leaves

        # one branch node per distinct joinpoint; a hub joins all its segments at xi_{i,1}
        branch_of_segment = [0, 0]
        node_of_hub: dict[int, int] = {}
        positions: dict[int, float] = {}
        for k in range(2, leaves + 1):
            hub = self.sources[k - 2]
            if hub != OCTANT and hub in node_of_hub:
                branch_of_segment.append(node_of_hub[hub])
                continue
            node = len(labels)
            labels.append(str(hub) if hub != OCTANT else "")
            kinds.append(NodeKind.HUB if hub != OCTANT else NodeKind.INTERNAL)
            positions[node] = float(self.joinpoints[k - 2])
            if hub != OCTANT:
                node_of_hub[hub] = node
            branch_of_segment.append(node)

        parent = [-1] * len(labels)
        lengths = [0.0] * len(labels)
        on_segment: dict[int, list[int]] = {}
        for node, position in positions.items():
            segment = int(self.segment_of(np.array([position]))[0])
            on_segment.setdefault(segment, []).append(node)
        for k in range(1, leaves + 1):
            start = 0.0 if k == 1 else float(cuts[k - 2])
            previous, previous_position = branch_of_segment[k], start
            for node in sorted(on_segment.get(k, []), key=positions.__getitem__):
                parent[node] = previous
                lengths[node] = positions[node] - previous_position
                previous, previous_position = node, positions[node]
            parent[k] = previous
            lengths[k] = float(cuts[k - 1]) - previous_position
        return EdgeTree(
            parent=tuple(parent), lengths=tuple(lengths), labels=tuple(labels), kinds=tuple(kinds)
        )


def sample_stick_breaking(theta: ThetaVector, leaves: int, rng: RngStream) -> StickBreaking:
    """Draw the first ``leaves`` cutpoints of the merged point processes."""
    if leaves < 1:
        raise OutOfRange(f"Stick breaking needs J >= 1 leaves, got {leaves}")
    if theta.theta0 <= 0.0:
        raise DegenerateTheta("Brownian weight theta0 must be positive")
    generator = rng.generator
    streams = [_octant_cuts(theta.theta0, generator)] + [
        _hub_cuts(i, rate, generator) for i, rate in enumerate(theta.thetas, start=1)
    ]
    cuts = list(itertools.islice(heapq.merge(*streams), leaves))
    logger.debug("Stick breaking with %s leaves reached eta_J=%s", leaves, cuts[-1][0])
    return StickBreaking(
        theta=theta,
        cutpoints=np.array([cut[0] for cut in cuts]),
        joinpoints=np.array([cut[1] for cut in cuts]),
        sources=tuple(cut[2] for cut in cuts),
    )


def stick_break(theta: ThetaVector, leaves: int, rng: RngStream) -> EdgeTree:
    """T^theta_J with leaves 1+, ..., J+."""
    return sample_stick_breaking(theta, leaves, rng).to_edge_tree()
