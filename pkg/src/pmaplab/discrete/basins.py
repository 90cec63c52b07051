"""
Cycles, basins and tree components of a mapping, and the q-biased random order of basins.

Removing the edges c -> m(c) leaving cyclic points splits the functional graph into the rooted
trees T_c, one per cyclic point c. A basin is a connected component and holds exactly one
cycle. The q-biased order reads an i.i.d. q-sample X_2, X_3, ... and lists basins in the order
the sample first enters them; inside the cycle of the j-th basin the selected point c_j (the
root of the tree containing the first entrant) is put last: m(c_j), m^2(c_j), ..., c_j.
"""

import logging
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from pmaplab.core.errors import InconsistentOrder
from pmaplab.core.prob import RankedProb, weight_vector
from pmaplab.core.rng import RngStream

from .mapping import Mapping, cyclic_mask
from .tree import NO_PARENT, children_lists

# Setup logger
logger = logging.getLogger("basins")

SAMPLE_BATCH = 64


class QSampler:
    """
    Lazy i.i.d. draws from q, indexed 2, 3, ... like X_2, X_3, ...
    """

    def __init__(self, q: np.ndarray, rng: RngStream) -> None:
        self.q = q
        self.rng = rng

    def __iter__(self) -> Iterator[tuple[int, int]]:
        index = 1
        while True:
            for x in self.rng.choice(self.q, SAMPLE_BATCH):
                index += 1
                yield index, int(x)


@dataclass(frozen=True, eq=False)
class RawDecomposition:
    """
    Unordered cycle structure of a mapping.

    ``cycles`` lists every cycle from its smallest point following m; ``cycle_of`` gives the
    cycle index of each vertex's basin and ``root_of`` the cyclic point c with v in T_c.
    """

    mapping: Mapping
    cyclic: np.ndarray
    cycles: tuple[tuple[int, ...], ...]
    cycle_of: np.ndarray
    root_of: np.ndarray
    forest_children: tuple[tuple[int, ...], ...]

    @property
    def n(self) -> int:
        return self.mapping.n

    def component(self, c: int) -> tuple[int, ...]:
        """Vertices of T_c."""
        return tuple(int(v) for v in np.flatnonzero(self.root_of == c))

    def basin(self, index: int) -> tuple[int, ...]:
        """Vertices of the basin holding cycle ``index``."""
        return tuple(int(v) for v in np.flatnonzero(self.cycle_of == index))


@dataclass(frozen=True, eq=False)
class BasinDecomposition:
    """
    Basins in q-biased order, with the linear order on cyclic points.
    """

    raw: RawDecomposition
    cycles: tuple[tuple[int, ...], ...]
    basins: tuple[tuple[int, ...], ...]
    selected: tuple[int, ...]
    tau: tuple[int, ...]

    @property
    def mapping(self) -> Mapping:
        return self.raw.mapping

    @property
    def cyclic_linear_order(self) -> tuple[int, ...]:
        """Cyclic points listed by the order used for the walk."""
        return tuple(c for cycle in self.cycles for c in cycle)

    def basin_masses(self, w: np.ndarray) -> np.ndarray:
        """Mass of every basin under w, in basin order."""
        return np.array([float(np.sum(w[list(basin)])) for basin in self.basins])


def basin_decomposition(m: Mapping) -> RawDecomposition:
    """Cycles, basins and tree components of m."""
    mask = cyclic_mask(m)
    image = m.image
    cycle_of = np.full(m.n, -1, dtype=np.int64)
    cycles = []
    for c in np.flatnonzero(mask):
        if cycle_of[c] >= 0:
            continue
        cycle = [int(c)]
        v = int(image[c])
        while v != c:
            cycle.append(v)
            v = int(image[v])
        cycle_of[cycle] = len(cycles)
        cycles.append(tuple(cycle))

    root_of = np.where(mask, np.arange(m.n), -1)
    for start in range(m.n):
        path = []
        v = start
        while root_of[v] < 0:
            path.append(v)
            v = int(image[v])
        root_of[path] = root_of[v]
        cycle_of[path] = cycle_of[v]

    forest_parent = np.where(mask, NO_PARENT, image)
    forest_children = tuple(tuple(kids) for kids in children_lists(forest_parent))
    logger.debug("Mapping on %s points has %s cycles", m.n, len(cycles))
    return RawDecomposition(
        mapping=m,
        cyclic=mask,
        cycles=tuple(cycles),
        cycle_of=cycle_of,
        root_of=root_of,
        forest_children=forest_children,
    )


def order_from_selection(
    raw: RawDecomposition, selected: Sequence[int], tau: Sequence[int]
) -> BasinDecomposition:
    """
    Ordered decomposition whose j-th basin is the one of ``selected[j]``.

    Every basin must be selected exactly once through a cyclic point.
    """
    indices = [int(raw.cycle_of[c]) for c in selected]
    if sorted(indices) != list(range(len(raw.cycles))) or not all(
        raw.cyclic[c] for c in selected
    ):
        raise InconsistentOrder("Selected points must be cyclic, one per basin")
    image = raw.mapping.image
    cycles = []
    for c in selected:
        cycle = [int(image[c])]
        while cycle[-1] != c:
            cycle.append(int(image[cycle[-1]]))
        cycles.append(tuple(cycle))
    return BasinDecomposition(
        raw=raw,
        cycles=tuple(cycles),
        basins=tuple(raw.basin(index) for index in indices),
        selected=tuple(int(c) for c in selected),
        tau=tuple(int(t) for t in tau),
    )


def q_biased_order(
    raw: RawDecomposition, q: "RankedProb | np.ndarray | Sequence[float]", rng: RngStream
) -> BasinDecomposition:
    """Order the basins of ``raw`` by first entrance of an i.i.d. q-sample."""
    weights = weight_vector(q, raw.n)
    seen = np.zeros(len(raw.cycles), dtype=bool)
    selected: list[int] = []
    tau: list[int] = []
    for index, x in QSampler(weights, rng):
        basin = raw.cycle_of[x]
        if seen[basin]:
            continue
        seen[basin] = True
        selected.append(int(raw.root_of[x]))
        tau.append(index)
        if len(selected) == len(raw.cycles):
            break
    logger.debug("q-biased order selected %s after %s draws", selected, tau[-1])
    return order_from_selection(raw, selected, tau)


def randomize_forest_order(raw: RawDecomposition, rng: RngStream) -> tuple[tuple[int, ...], ...]:
    """Uniform random plane order on every tree T_c, independently across vertices."""
    forest_parent = np.where(raw.cyclic, NO_PARENT, raw.mapping.image)
    keys = rng.generator.random(raw.n)
    return tuple(tuple(kids) for kids in children_lists(forest_parent, keys))
