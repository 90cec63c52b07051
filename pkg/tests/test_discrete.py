"""Test mappings, trees, the parent code, enumeration and basin orders."""

import itertools
from collections import Counter

import numpy as np
import pytest

from pmaplab.core.errors import InconsistentOrder, InvalidStructure, MalformedCode, TooLarge
from pmaplab.core.prob import RankedProb
from pmaplab.core.rng import RngStream
from pmaplab.discrete.basins import (
    basin_decomposition,
    order_from_selection,
    q_biased_order,
    randomize_forest_order,
)
from pmaplab.discrete.enumerate import (
    StructureKind,
    enumerate_mappings,
    enumerate_structures,
    enumerate_trees,
)
from pmaplab.discrete.mapping import (
    Mapping,
    cyclic_points,
    mapping_diameter,
    mapping_heights,
    mapping_probability,
    sample_p_mapping,
)
from pmaplab.discrete.tree import (
    PlaneTree,
    RootedTree,
    decode_tree,
    encode_tree,
    randomize_plane_order,
    sample_p_tree,
    tree_heights,
    tree_probability,
)


@pytest.fixture
def p_two() -> RankedProb:
    """The two-point law (0.7, 0.3)."""
    return RankedProb(np.array([0.7, 0.3]))


def test_mapping_probability(p_two: RankedProb) -> None:
    """Test P(M = m) as a product of image masses."""
    assert mapping_probability(p_two, Mapping.from_labels((1, 1))) == pytest.approx(0.49)
    assert mapping_probability(p_two, Mapping.from_labels((2, 1))) == pytest.approx(0.21)
    with pytest.raises(InvalidStructure):
        mapping_probability(p_two, Mapping.from_labels((1, 1, 1)))


def test_mapping_rejects_bad_images() -> None:
    """Test that images outside [n] are rejected."""
    with pytest.raises(InvalidStructure):
        Mapping.from_labels((1, 3))
    with pytest.raises(InvalidStructure):
        Mapping(np.array([], dtype=np.int64))


def test_sample_p_mapping_single_point() -> None:
    """Test that n = 1 always gives the fixed point."""
    assert sample_p_mapping(RankedProb.uniform(1), RngStream(1)).labels() == (1,)


@pytest.mark.slow
def test_sample_p_mapping_frequency(p_two: RankedProb) -> None:
    """Test the frequency of m = (1, 1) against 0.49."""
    draws = 200_000
    hits = sum(
        sample_p_mapping(p_two, RngStream(4, index)).labels() == (1, 1) for index in range(draws)
    )
    assert abs(hits / draws - 0.49) < 3 * np.sqrt(0.49 * 0.51 / draws)


def test_cyclic_points_and_heights() -> None:
    """Test cyclic points, heights and diameter on a small mapping."""
    m = Mapping.from_labels((2, 3, 2, 1, 4, 6))
    assert list(cyclic_points(m)) == [1, 2, 5]
    assert list(mapping_heights(m)) == [1, 0, 0, 2, 3, 0]
    # 5 -> 4 -> 1 -> 2 -> 3 visits five distinct points
    assert mapping_diameter(m) == 5


def test_decode_star_and_edge() -> None:
    """Test decoding of the two smallest informative codes."""
    star = decode_tree((0, 0), 3)
    assert star.root == 0
    assert star.children[0] == [1, 2]
    edge = decode_tree((0,), 2)
    assert edge.to_payload().parent == [0, 1]


def test_decode_single_vertex() -> None:
    """Test that the empty code gives the single-vertex tree."""
    t = decode_tree((), 1)
    assert t.root == 0 and t.n == 1
    assert encode_tree(t) == ()


def test_parent_code_is_a_bijection() -> None:
    """Test that codes of all trees on 4 vertices are distinct and decode back."""
    codes = [encode_tree(t) for t in enumerate_trees(4)]
    assert len(codes) == 64 == len(set(codes))
    for code in itertools.product(range(4), repeat=3):
        assert encode_tree(decode_tree(code, 4)) == code


def test_code_counts_children() -> None:
    """Test that vertex i occurs c_i(t) times in the code of t."""
    t = RootedTree.from_parent_labels(2, (2, 0, 2, 1, 1))
    counts = np.bincount(np.asarray(encode_tree(t)), minlength=t.n)
    assert np.array_equal(counts, t.child_count)


@pytest.mark.parametrize(
    "code, n",
    [((0,), 3), ((0, 5), 3), ((0,), 0)],
)
def test_decode_rejects(code: tuple[int, ...], n: int) -> None:
    """Test malformed codes."""
    with pytest.raises(MalformedCode):
        decode_tree(code, n)


def test_rooted_tree_rejects_cycles() -> None:
    """Test that a parent array with a cycle is not a tree."""
    with pytest.raises(InvalidStructure):
        RootedTree(0, np.array([-1, 2, 1]))


def test_tree_probability_sums_to_one() -> None:
    """Test that p-tree probabilities over all trees sum to one."""
    p = RankedProb(np.array([0.4, 0.3, 0.2, 0.1]))
    total = sum(tree_probability(p, t) for t in enumerate_trees(4))
    assert total == pytest.approx(1.0, abs=1e-12)


def test_tree_heights_and_paths() -> None:
    """Test depths and root paths on a path tree."""
    t = RootedTree.from_parent_labels(1, (0, 1, 2))
    assert list(tree_heights(t)) == [0, 1, 2]
    assert t.path_to_root(2) == [2, 1, 0]
    assert t.depth_of(2) == 2


def test_sample_p_tree_size() -> None:
    """Test that sampled trees span all vertices."""
    p = RankedProb.uniform(30)
    t = sample_p_tree(p, RngStream(8))
    assert t.n == 30 and len(t.breadth_first) == 30


@pytest.mark.parametrize(
    "n, kind, count",
    [(2, StructureKind.TREE, 2), (3, StructureKind.MAPPING, 27), (4, StructureKind.TREE, 64)],
)
def test_enumeration_counts(n: int, kind: StructureKind, count: int) -> None:
    """Test the sizes of the enumerated families."""
    assert sum(1 for _ in enumerate_structures(n, kind)) == count


def test_enumeration_limit() -> None:
    """Test that oversized enumerations fail before yielding anything."""
    with pytest.raises(TooLarge):
        enumerate_mappings(8)
    with pytest.raises(TooLarge):
        enumerate_trees(5, limit=4)


def test_randomize_plane_order() -> None:
    """Test random sibling orders on leaves, single children and pairs."""
    t = RootedTree.from_parent_labels(1, (0, 1, 1, 2))
    orders = Counter(randomize_plane_order(t, RngStream(3, k)).children for k in range(4000))
    for children in orders:
        assert children[1] == (3,)
        assert children[2] == ()
    firsts = Counter(children[0][0] for children in orders.elements())
    assert firsts[1] / 4000 == pytest.approx(0.5, abs=0.03)


def test_plane_tree_rejects_wrong_children() -> None:
    """Test that a plane order must list the children of the tree."""
    t = RootedTree.from_parent_labels(1, (0, 1, 1))
    with pytest.raises(InvalidStructure):
        PlaneTree.from_children(t, ((1,), (), ()))


def test_basin_decomposition_small() -> None:
    """Test cycles, basins and tree components on small mappings."""
    raw = basin_decomposition(Mapping.from_labels((1, 1, 2)))
    assert raw.cycles == ((0,),)
    assert raw.basin(0) == (0, 1, 2)
    assert raw.forest_children == ((1,), (2,), ())

    identity = basin_decomposition(Mapping.from_labels((1, 2, 3)))
    assert identity.cycles == ((0,), (1,), (2,))
    assert [identity.basin(j) for j in range(3)] == [(0,), (1,), (2,)]

    swap = basin_decomposition(Mapping.from_labels((2, 1)))
    assert swap.cycles == ((0, 1),)
    assert swap.component(0) == (0,) and swap.component(1) == (1,)


def test_order_puts_selected_point_last() -> None:
    """Test that the selected cyclic point closes its cycle."""
    raw = basin_decomposition(Mapping.from_labels((2, 1)))
    ordered = order_from_selection(raw, (0,), (2,))
    assert ordered.cyclic_linear_order == (1, 0)
    with pytest.raises(InconsistentOrder):
        order_from_selection(raw, (0, 1), (2, 3))


def test_single_basin_first_draw() -> None:
    """Test that a single basin is found by the first draw."""
    raw = basin_decomposition(Mapping.from_labels((1, 1, 2)))
    ordered = q_biased_order(raw, np.full(3, 1 / 3), RngStream(2))
    assert ordered.tau == (2,)
    assert ordered.selected == (0,)


def test_heavy_basin_first() -> None:
    """Test that the basin of q-mass 0.9 comes first nine times in ten."""
    raw = basin_decomposition(Mapping.from_labels((1, 2)))
    q = np.array([0.9, 0.1])
    draws = 5000
    heavy = sum(q_biased_order(raw, q, RngStream(6, k)).selected[0] == 0 for k in range(draws))
    assert heavy / draws == pytest.approx(0.9, abs=0.015)


def test_randomize_forest_order_keeps_components() -> None:
    """Test that random forest orders permute the children of each tree component."""
    raw = basin_decomposition(Mapping.from_labels((1, 1, 1, 3, 3)))
    orders = randomize_forest_order(raw, RngStream(1))
    assert [sorted(kids) for kids in orders] == [list(kids) for kids in raw.forest_children]
