"""
Mappings of [n] to itself and the p-mapping sampler.

Vertices are the integers 0..n-1 internally; payloads and ``from_labels`` use the 1-based labels
of the literature.
"""

import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from pmaplab.core.errors import InvalidStructure
from pmaplab.core.models import MappingPayload
from pmaplab.core.prob import RankedProb
from pmaplab.core.rng import RngStream

# Setup logger
logger = logging.getLogger("mapping")


@dataclass(frozen=True, eq=False)
class Mapping:
    """
    A map m from [n] to [n] stored as its image array.
    """

    image: np.ndarray

    def __post_init__(self) -> None:
        image = np.array(self.image, dtype=np.int64)
        if image.ndim != 1 or image.size == 0:
            raise InvalidStructure("Mapping image must be a non-empty 1-D array")
        if image.min() < 0 or image.max() >= image.size:
            raise InvalidStructure("Mapping image has entries outside [n]")
        image.setflags(write=False)
        object.__setattr__(self, "image", image)

    @classmethod
    def from_labels(cls, labels: Sequence[int]) -> "Mapping":
        """Build from 1-based labels, e.g. ``(1, 1, 2)``."""
        return cls(np.asarray(labels, dtype=np.int64) - 1)

    @classmethod
    def from_payload(cls, payload: MappingPayload) -> "Mapping":
        return cls.from_labels(payload.image)

    @property
    def n(self) -> int:
        return int(self.image.size)

    def labels(self) -> tuple[int, ...]:
        """Image as 1-based labels."""
        return tuple(int(v) + 1 for v in self.image)

    def to_payload(self) -> MappingPayload:
        return MappingPayload(image=list(self.labels()))

    def key(self) -> tuple[int, ...]:
        """Hashable identity of the mapping."""
        return tuple(int(v) for v in self.image)


def sample_p_mapping(p: RankedProb, rng: RngStream) -> Mapping:
    """Draw every image independently from p."""
    return Mapping(rng.choice(p.values, p.n))


def mapping_probability(p: RankedProb, m: Mapping) -> float:
    """P(M = m) = prod_i p_{m(i)}."""
    if m.n != p.n:
        raise InvalidStructure(f"Mapping on {m.n} points, probability on {p.n}")
    return math.prod(float(v) for v in p.values[m.image])


def cyclic_points(m: Mapping) -> np.ndarray:
    """
    Sorted cyclic points of m.

    The image of m^(2^k) with 2^k >= n is exactly the set of cyclic points, and m^(2^k) is
    reached by k squarings of the image array.
    """
    power = m.image
    for _ in range(max(0, math.ceil(math.log2(m.n)))):
        power = power[power]
    return np.unique(power)


def cyclic_mask(m: Mapping) -> np.ndarray:
    """Boolean mask of the cyclic points."""
    mask = np.zeros(m.n, dtype=bool)
    mask[cyclic_points(m)] = True
    return mask


def mapping_heights(m: Mapping) -> np.ndarray:
    """Distance from every vertex to the set of cyclic points."""
    heights = np.full(m.n, -1, dtype=np.int64)
    heights[cyclic_mask(m)] = 0
    for start in range(m.n):
        path = []
        v = start
        while heights[v] < 0:
            path.append(v)
            v = int(m.image[v])
        base = heights[v]
        for offset, u in enumerate(reversed(path), start=1):
            heights[u] = base + offset
    return heights


def mapping_diameter(m: Mapping) -> int:
    """Largest number of distinct points v, m(v), m^2(v), ... over all v."""
    mask = cyclic_mask(m)
    cycle_length = np.zeros(m.n, dtype=np.int64)
    for c in np.flatnonzero(mask):
        if cycle_length[c]:
            continue
        cycle = [int(c)]
        v = int(m.image[c])
        while v != c:
            cycle.append(v)
            v = int(m.image[v])
        cycle_length[cycle] = len(cycle)
    heights = mapping_heights(m)
    # a vertex at height h lands after h steps on the cyclic point m^h(v)
    landing = np.arange(m.n)
    for _ in range(int(heights.max())):
        landing = np.where(mask[landing], landing, m.image[landing])
    return int(np.max(heights + cycle_length[landing]))
