"""
Rooted and plane trees on [n], the parent code bijection and the p-tree sampler.

A tree on [n] is encoded by the sequence of parents met while repeatedly pruning the largest
leaf; the last entry is the root. Decoding reverses the pruning with a max-heap of the labels
that will never occur again. The code of t contains vertex i exactly c_i(t) times, so drawing
the n-1 entries i.i.d. from p yields P(T = t) = prod_i p_i^{c_i(t)}.
"""

import heapq
import logging
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from pmaplab.core.errors import InvalidStructure, MalformedCode
from pmaplab.core.models import TreePayload
from pmaplab.core.prob import RankedProb
from pmaplab.core.rng import RngStream

# Setup logger
logger = logging.getLogger("tree")

NO_PARENT = -1


def children_lists(parent: np.ndarray, order_keys: np.ndarray | None = None) -> list[list[int]]:
    """
    Children of every vertex, sorted by label or by ``order_keys`` when given.

    Entries equal to ``NO_PARENT`` are skipped.
    """
    n = parent.size
    keys = np.arange(n) if order_keys is None else order_keys
    ordered = np.lexsort((keys, parent))
    children: list[list[int]] = [[] for _ in range(n)]
    for v in ordered:
        a = int(parent[v])
        if a != NO_PARENT:
            children[a].append(int(v))
    return children


@dataclass(frozen=True, eq=False)
class RootedTree:
    """
    Tree on [n] given by its root and parent array (``parent[root] == NO_PARENT``).
    """

    root: int
    parent: np.ndarray

    def __post_init__(self) -> None:
        parent = np.array(self.parent, dtype=np.int64)
        n = parent.size
        if parent.ndim != 1 or n == 0:
            raise InvalidStructure("Parent array must be a non-empty 1-D array")
        if not 0 <= self.root < n or parent[self.root] != NO_PARENT:
            raise InvalidStructure("Root must be a vertex whose parent is the sentinel")
        others = np.delete(parent, self.root)
        if others.size and (others.min() < 0 or others.max() >= n):
            raise InvalidStructure("Parent array has entries outside [n]")
        parent.setflags(write=False)
        object.__setattr__(self, "parent", parent)
        if len(self.breadth_first) != n:
            raise InvalidStructure("Parent array contains a cycle or is disconnected")

    @classmethod
    def from_parent_labels(cls, root: int, parents: Sequence[int]) -> "RootedTree":
        """Build from 1-based labels with 0 as the parent of the root."""
        parent = np.asarray(parents, dtype=np.int64) - 1
        return cls(root - 1, parent)

    @classmethod
    def from_payload(cls, payload: TreePayload) -> "RootedTree":
        return cls.from_parent_labels(payload.root, payload.parent)

    def to_payload(self) -> TreePayload:
        return TreePayload(root=self.root + 1, parent=[int(a) + 1 for a in self.parent])

    @property
    def n(self) -> int:
        return int(self.parent.size)

    @cached_property
    def children(self) -> list[list[int]]:
        """Children of each vertex in increasing label order."""
        return children_lists(self.parent)

    @cached_property
    def child_count(self) -> np.ndarray:
        """c_i(t), the number of children of every vertex."""
        counts = np.bincount(np.delete(self.parent, self.root), minlength=self.n)
        counts.setflags(write=False)
        return counts

    @cached_property
    def breadth_first(self) -> tuple[int, ...]:
        """Vertices reachable from the root, level by level."""
        order = [self.root]
        for v in order:
            order.extend(self.children[v])
        return tuple(order)

    def depth_of(self, v: int) -> int:
        """Distance from v to the root."""
        depth = 0
        while v != self.root:
            v = int(self.parent[v])
            depth += 1
        return depth

    def path_to_root(self, v: int) -> list[int]:
        """Vertices from v up to the root, both included."""
        path = [v]
        while v != self.root:
            v = int(self.parent[v])
            path.append(v)
        return path

    def key(self) -> tuple[int, ...]:
        """Hashable identity (the parent array determines the root)."""
        return tuple(int(a) for a in self.parent)


def tree_heights(t: RootedTree) -> np.ndarray:
    """Depth of every vertex."""
    depths = np.zeros(t.n, dtype=np.int64)
    for v in t.breadth_first[1:]:
        depths[v] = depths[t.parent[v]] + 1
    return depths


@dataclass(frozen=True, eq=False)
class PlaneTree:
    """
    Rooted tree together with an order on the children of every vertex.
    """

    tree: RootedTree
    children: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if len(self.children) != self.tree.n:
            raise InvalidStructure("Plane order must list children for every vertex")
        for v, kids in enumerate(self.children):
            if sorted(kids) != self.tree.children[v]:
                raise InvalidStructure(f"Plane order of vertex {v} does not match the tree")

    @classmethod
    def from_children(cls, tree: RootedTree, children: Sequence[Sequence[int]]) -> "PlaneTree":
        return cls(tree, tuple(tuple(int(c) for c in kids) for kids in children))

    @classmethod
    def by_label(cls, tree: RootedTree) -> "PlaneTree":
        """Children ordered by increasing label."""
        return cls.from_children(tree, tree.children)

    @property
    def root(self) -> int:
        return self.tree.root

    @property
    def n(self) -> int:
        return self.tree.n


def encode_tree(t: RootedTree) -> tuple[int, ...]:
    """Parent code of length n-1 (empty for n = 1)."""
    remaining = t.child_count.copy()
    leaves = [-v for v in range(t.n) if remaining[v] == 0 and v != t.root]
    heapq.heapify(leaves)
    code = []
    for _ in range(t.n - 1):
        leaf = -heapq.heappop(leaves)
        a = int(t.parent[leaf])
        code.append(a)
        remaining[a] -= 1
        if remaining[a] == 0 and a != t.root:
            heapq.heappush(leaves, -a)
    return tuple(code)


def decode_tree(code: Sequence[int], n: int) -> RootedTree:
    """Inverse of ``encode_tree``."""
    if n < 1:
        raise MalformedCode(f"Trees need n >= 1, got {n}")
    entries = np.asarray(code, dtype=np.int64)
    if entries.size != n - 1:
        raise MalformedCode(f"Code of length {entries.size} for a tree on {n} vertices")
    if entries.size and (entries.min() < 0 or entries.max() >= n):
        raise MalformedCode("Code entries must lie in [n]")
    remaining = np.bincount(entries, minlength=n)
    leaves = [-v for v in range(n) if remaining[v] == 0]
    heapq.heapify(leaves)
    parent = np.full(n, NO_PARENT, dtype=np.int64)
    for a in entries:
        leaf = -heapq.heappop(leaves)
        parent[leaf] = a
        remaining[a] -= 1
        if remaining[a] == 0:
            heapq.heappush(leaves, -int(a))
    root = int(entries[-1]) if n > 1 else 0
    parent[root] = NO_PARENT
    return RootedTree(root, parent)


def sample_p_tree(p: RankedProb, rng: RngStream) -> RootedTree:
    """Draw T with P(T = t) = prod_i p_i^{c_i(t)}."""
    return decode_tree(rng.choice(p.values, p.n - 1), p.n)


def tree_probability(p: RankedProb, t: RootedTree) -> float:
    """prod_i p_i^{c_i(t)}."""
    if t.n != p.n:
        raise InvalidStructure(f"Tree on {t.n} vertices, probability on {p.n}")
    return math.prod(float(v) ** int(c) for v, c in zip(p.values, t.child_count) if c)


def randomize_plane_order(t: RootedTree, rng: RngStream) -> PlaneTree:
    """Order every sibling set uniformly at random, independently across vertices."""
    keys = rng.generator.random(t.n)
    return PlaneTree.from_children(t, children_lists(t.parent, keys))
