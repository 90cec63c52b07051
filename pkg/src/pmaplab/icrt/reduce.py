"""
Subtrees spanned by the root and a set of targets, rescaling and shape signatures.
"""

import logging
from dataclasses import replace
from typing import Sequence

from pmaplab.core.errors import InvalidStructure, NonpositiveScale, UnknownVertex
from pmaplab.discrete.tree import RootedTree

from .tree import ROOT_LABEL, EdgeTree, NodeKind, leaf_label

# Setup logger
logger = logging.getLogger("reduce")


def as_edge_tree(t: RootedTree) -> EdgeTree:
    """Unit-length edge tree with the root moved to node 0; vertex v keeps label ``str(v)``."""
    order = t.breadth_first
    node_of = {v: i for i, v in enumerate(order)}
    parent = tuple(-1 if v == t.root else node_of[int(t.parent[v])] for v in order)
    return EdgeTree(
        parent=parent,
        lengths=(0.0,) + (1.0,) * (t.n - 1),
        labels=tuple(ROOT_LABEL if v == t.root else str(v) for v in order),
        kinds=(NodeKind.ROOT,) + (NodeKind.INTERNAL,) * (t.n - 1),
    )


def span_reduce(t: RootedTree | EdgeTree, targets: Sequence[int]) -> EdgeTree:
    """
    Subtree spanned by the root and ``targets`` with degree-two internal nodes erased.

    The i-th target (0-based) is labelled ``"{i + 1}+"``; a node hit several times joins its
    labels with commas. Targets are vertices of a ``RootedTree`` or nodes of an ``EdgeTree``.
    """
    if len(targets) == 0:
        raise InvalidStructure("span_reduce needs at least one target")
    if isinstance(t, RootedTree):
        if any(not 0 <= v < t.n for v in targets):
            raise UnknownVertex(f"Targets {list(targets)} outside the {t.n} vertices")
        node_of = {v: i for i, v in enumerate(t.breadth_first)}
        tree, nodes = as_edge_tree(t), [node_of[v] for v in targets]
    else:
        if any(not 0 <= v < t.size for v in targets):
            raise UnknownVertex(f"Targets {list(targets)} outside the {t.size} nodes")
        tree, nodes = t, list(targets)

    names: dict[int, list[str]] = {}
    for i, v in enumerate(nodes, start=1):
        names.setdefault(v, []).append(leaf_label(i))
    marked_children: dict[int, set[int]] = {}
    marked = {0}
    for v in nodes:
        while v not in marked:
            marked.add(v)
            marked_children.setdefault(tree.parent[v], set()).add(v)
            v = tree.parent[v]
    kept = [
        v
        for v in tree.depth_order
        if v in marked and (v == 0 or v in names or len(marked_children.get(v, ())) >= 2)
    ]
    new_id = {v: i for i, v in enumerate(kept)}
    parent, lengths = [-1], [0.0]
    for v in kept[1:]:
        length, a = tree.lengths[v], tree.parent[v]
        while a not in new_id:
            length += tree.lengths[a]
            a = tree.parent[a]
        parent.append(new_id[a])
        lengths.append(length)
    labels = [ROOT_LABEL] + [",".join(names.get(v, [])) for v in kept[1:]]
    kinds = [NodeKind.ROOT] + [
        NodeKind.LEAF if v in names else NodeKind.INTERNAL for v in kept[1:]
    ]
    if 0 in names:
        labels[0] = ",".join([ROOT_LABEL, *names[0]])
    return EdgeTree(
        parent=tuple(parent), lengths=tuple(lengths), labels=tuple(labels), kinds=tuple(kinds)
    )


def rescale(a: float, t: EdgeTree) -> EdgeTree:
    """Multiply every edge length by a > 0."""
    if a <= 0.0:
        raise NonpositiveScale(f"Scale must be positive, got {a}")
    return replace(t, lengths=tuple(a * length for length in t.lengths))


def shape_signature(t: EdgeTree) -> str:
    """
    Canonical code of the rooted shape keeping leaf labels; internal and hub labels and edge
    lengths are ignored, so isomorphic leaf-labelled shapes share one code.
    """
    codes: dict[int, str] = {}
    for v in reversed(t.depth_order):
        if v == 0:
            head = t.labels[0]
        else:
            head = t.labels[v] if t.kinds[v] == NodeKind.LEAF else "*"
        kids = sorted(codes[c] for c in t.children[v])
        codes[v] = f"{head}({','.join(kids)})" if kids else head
    return codes[0]
