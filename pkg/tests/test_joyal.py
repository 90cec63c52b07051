"""Test the pre-post infimum, generalized excursions, the Joyal functional and the spine."""

import numpy as np
import pytest

from pmaplab.core.errors import HeightTie, SpineMismatch
from pmaplab.core.prob import RankedProb
from pmaplab.core.rng import RngStream
from pmaplab.discrete.mapping import cyclic_points
from pmaplab.discrete.tree import PlaneTree, RootedTree, randomize_plane_order, sample_p_tree
from pmaplab.joyal.correspondence import joyal_correspondence, lemma_instance
from pmaplab.joyal.functional import (
    generalized_excursions,
    joyal_functional,
    pre_post_infimum,
    rearrange,
)
from pmaplab.joyal.spine import joyal_tilde, spine_lift, spine_of
from pmaplab.walks.height import tree_height_walk
from pmaplab.walks.step import StepFunction


@pytest.fixture
def six_steps() -> StepFunction:
    """Six equal steps with values (1, 2, 3, 2, 1, 0)."""
    return StepFunction(np.full(6, 1 / 6), [1.0, 2.0, 3.0, 2.0, 1.0, 0.0], np.arange(6))


def test_pre_post_infimum(six_steps: StepFunction) -> None:
    """Test the running infimum towards u from both sides."""
    assert list(pre_post_infimum(six_steps, 0.25).values) == [1.0, 2.0, 2.0, 2.0, 1.0, 0.0]
    constant = StepFunction([0.5, 0.5], [3.0, 3.0])
    assert list(pre_post_infimum(constant, 0.7).values) == [3.0, 3.0]


def test_pre_post_infimum_at_maximum() -> None:
    """Test that the pre part is the running minimum from the left up to the maximum."""
    f = StepFunction(np.full(4, 0.25), [2.0, 1.0, 3.0, 0.0])
    assert list(pre_post_infimum(f, 0.6).values) == [1.0, 1.0, 3.0, 0.0]


def test_generalized_excursions(six_steps: StepFunction) -> None:
    """Test the three excursions of the six-step example."""
    items = generalized_excursions(six_steps, 0.25).items
    assert [item.height for item in items] == [2.0, 1.0, 0.0]
    assert items[0].length == pytest.approx(3 / 6)
    assert list(items[0].path.values) == [0.0, 1.0, 0.0]
    assert items[1].steps == ((0, 1), (4, 5))
    assert items[1].intervals[0] == pytest.approx((0.0, 1 / 6))
    assert items[1].intervals[1] == pytest.approx((4 / 6, 5 / 6))
    assert list(items[1].path.values) == [0.0, 0.0]
    assert items[2].length == pytest.approx(1 / 6)


def test_generalized_excursions_edge_cases() -> None:
    """Test the zero function and an increasing function seen from its end."""
    zero = generalized_excursions(StepFunction([1.0], [0.0]), 0.5)
    assert len(zero.items) == 1 and zero.items[0].length == 1.0
    increasing = StepFunction(np.full(4, 0.25), [0.0, 1.0, 2.0, 3.0])
    items = generalized_excursions(increasing, 1.0).items
    assert len(items) == 4
    assert all(len(item.steps) == 1 for item in items)


def test_joyal_functional(six_steps: StepFunction) -> None:
    """Test the rearranged six-step example and its marks."""
    output = joyal_functional(six_steps, 0.25)
    assert list(output.path.values) == [0.0, 0.0, 0.0, 0.0, 1.0, 0.0]
    assert output.d == pytest.approx((1 / 6, 3 / 6, 1.0))
    assert output.g == pytest.approx((0.0, 1 / 6, 3 / 6))
    assert output.heights == (0.0, 1.0, 2.0)
    assert output.path.evaluate(4 / 6 + 1e-9) == 1.0


def test_joyal_functional_trivial_inputs() -> None:
    """Test the zero function and a single excursion."""
    zero = joyal_functional(StepFunction([1.0], [0.0]), 0.3)
    assert list(zero.path.values) == [0.0]
    assert zero.g == (0.0,) and zero.d == (1.0,)
    bump = StepFunction([0.25, 0.5, 0.25], [1.0, 2.0, 1.0])
    output = joyal_functional(bump, 0.1)
    assert list(output.path.values) == [0.0, 1.0, 0.0]


def test_rearrange_rejects_ties() -> None:
    """Test that two excursions at one height are refused when ties are not allowed."""
    f = StepFunction(np.full(3, 1 / 3), [0.0, 1.0, 0.0])
    baseline = StepFunction(np.full(3, 1 / 3), [0.0, 1.0, 0.0])
    excursions = generalized_excursions(f, 0.1, baseline)
    assert len(rearrange(excursions).excursions) == 3
    with pytest.raises(HeightTie):
        rearrange(excursions, allow_ties=False)


def test_spine_of_star() -> None:
    """Test the spine and the owners of a star seen from a leaf."""
    t = RootedTree.from_parent_labels(1, (0, 1, 1))
    spine = spine_of(t, 1)
    assert spine.vertices == (0, 1)
    assert list(spine.owner) == [0, 1, 0]


def test_spine_lift_examples() -> None:
    """Test the lifted baseline on the star, the path and the root."""
    uniform = np.full(3, 1 / 3)
    star = PlaneTree.by_label(RootedTree.from_parent_labels(1, (0, 1, 1)))
    walk = tree_height_walk(star, uniform)
    assert list(spine_lift(walk, 0.5, spine_of(star.tree, 1)).values) == [1.0, 2.0, 1.0]
    assert list(spine_lift(walk, 0.1, spine_of(star.tree, 0)).values) == [1.0, 1.0, 1.0]

    path = PlaneTree.by_label(RootedTree.from_parent_labels(1, (0, 1, 2)))
    walk = tree_height_walk(path, uniform)
    assert list(spine_lift(walk, 0.9, spine_of(path.tree, 2)).values) == [1.0, 2.0, 3.0]
    with pytest.raises(SpineMismatch):
        spine_lift(walk, 0.1, spine_of(path.tree, 2))


def test_joyal_tilde_small_trees() -> None:
    """Test the modified functional on the single vertex and the path."""
    single = PlaneTree.by_label(RootedTree.from_parent_labels(1, (0,)))
    tilde = joyal_tilde(tree_height_walk(single, [1.0]), 0.5, spine_of(single.tree, 0))
    assert list(tilde.values) == [-1.0]

    path = PlaneTree.by_label(RootedTree.from_parent_labels(1, (0, 1, 2)))
    walk = tree_height_walk(path, np.full(3, 1 / 3))
    assert list(joyal_tilde(walk, 0.9, spine_of(path.tree, 2)).values) == [-1.0, -1.0, -1.0]


def test_joyal_correspondence_path_is_permutation() -> None:
    """Test that a spine covering the tree gives a permutation of consecutive cycles."""
    t = RootedTree.from_parent_labels(1, (0, 1, 2, 3))
    for k in range(20):
        m, ordered = joyal_correspondence(t, 3, np.full(4, 0.25), RngStream(9, k))
        assert sorted(m.key()) == [0, 1, 2, 3]
        assert ordered.cyclic_linear_order == (0, 1, 2, 3)


def test_joyal_correspondence_keeps_forest() -> None:
    """Test that vertices off the spine keep their parent as image."""
    t = RootedTree.from_parent_labels(1, (0, 1, 1, 3, 3))
    m, ordered = joyal_correspondence(t, 4, np.full(5, 0.2), RngStream(4))
    assert list(cyclic_points(m)) == [0, 2, 4]
    assert m.image[1] == 0 and m.image[3] == 2
    assert ordered.mapping is m


def test_lemma_on_star() -> None:
    """Test the walk identity on the star seen from a leaf."""
    star = PlaneTree.by_label(RootedTree.from_parent_labels(1, (0, 1, 1)))
    p = RankedProb.uniform(3)
    instance = lemma_instance(star, p, p, 0.5, p, RngStream(1))
    assert instance.x1 == 1
    assert list(instance.tilde.values) == [-1.0, 0.0, -1.0]
    assert list(instance.tilde.tags) == [0, 2, 1]
    assert instance.holds()


@pytest.mark.parametrize("seed", range(10))
def test_lemma_on_random_trees(seed: int) -> None:
    """Test the walk identity on random p-trees with unequal weights."""
    rng = RngStream(seed)
    p = RankedProb.from_weights(rng.child(0).generator.random(12) + 0.1)
    w = RankedProb.from_weights(rng.child(1).generator.random(12) + 0.1)
    pt = randomize_plane_order(sample_p_tree(p, rng.child(2)), rng.child(3))
    instance = lemma_instance(pt, p, w, rng.child(4).random(), w.values, rng.child(5))
    assert instance.holds()
