"""
Randomized self-check suites.

Each check receives its own RngStream(seed, instance) and returns the descriptions of the
properties that failed on that instance.
"""

import logging
import math
from typing import Callable

import numpy as np

from pmaplab.core.models import CheckReport, CheckSuite
from pmaplab.core.prob import RankedProb, ThetaVector, hub_family, sigma
from pmaplab.core.rng import RngStream
from pmaplab.discrete.basins import basin_decomposition, q_biased_order
from pmaplab.discrete.mapping import cyclic_points, sample_p_mapping
from pmaplab.discrete.tree import randomize_plane_order, sample_p_tree, tree_heights
from pmaplab.icrt.reduce import span_reduce
from pmaplab.icrt.stick import OCTANT, sample_stick_breaking
from pmaplab.icrt.tree import NodeKind
from pmaplab.joyal.correspondence import lemma_instance
from pmaplab.joyal.functional import generalized_excursions, joyal_functional
from pmaplab.limit.exploration import exploration_stages, limit_Z, local_time, marks_D
from pmaplab.plugins.exact import bijection_statistics
from pmaplab.walks.height import depth_first, mapping_walk, tree_height_walk
from pmaplab.walks.step import StepFunction
from pmaplab.walks.timechange import compose, time_change

# Setup logger
logger = logging.getLogger("checks")

Check = Callable[[RngStream], list[str]]

CHECK_TOLERANCE = 1e-9
LIMIT_GRID = 2**10


def random_probability(rng: RngStream, n: int) -> RankedProb:
    """Ranked vector from i.i.d. exponential weights."""
    return RankedProb.from_weights(rng.generator.exponential(size=n) + 1e-3)


def random_weights(rng: RngStream, n: int) -> np.ndarray:
    weights = rng.generator.exponential(size=n) + 1e-3
    return weights / weights.sum()


def random_theta(rng: RngStream) -> ThetaVector:
    """Up to two hubs, each at least 0.2."""
    hubs = int(rng.generator.integers(0, 3))
    thetas = sorted(rng.generator.uniform(0.2, 0.5, size=hubs), reverse=True)
    return ThetaVector(tuple(thetas))


def check_bijection(rng: RngStream) -> list[str]:
    n = int(rng.generator.integers(1, 6))
    statistics = bijection_statistics(n, random_probability(rng, n))
    return [
        f"bijection n={n}: {name}={value}"
        for name, value in statistics.items()
        if value > (1e-10 if name == "probability_error" else 0.0)
    ]


def check_walk_identity(rng: RngStream) -> list[str]:
    n = int(rng.generator.integers(1, 30))
    p = random_probability(rng, n)
    w, q = random_weights(rng, n), random_weights(rng, n)
    plane = randomize_plane_order(sample_p_tree(p, rng.child(0)), rng.child(1))
    instance = lemma_instance(plane, p, w, rng.random(), q, rng.child(2))
    failures = []
    if not instance.holds():
        failures.append(f"walk identity n={n}: modified Joyal walk differs from mapping walk")
    replay = q_biased_order(basin_decomposition(instance.mapping), q, rng.child(2))
    if replay.selected != instance.decomposition.selected:
        failures.append(f"walk identity n={n}: basin order differs from q-biased order")
    return failures


def _random_step_function(rng: RngStream) -> StepFunction:
    size = int(rng.generator.integers(1, 40))
    values = np.abs(np.cumsum(rng.generator.integers(-1, 2, size=size)))
    widths = rng.generator.exponential(size=size) + 1e-3
    return StepFunction(widths / widths.sum(), values)


def check_joyal(rng: RngStream) -> list[str]:
    f = _random_step_function(rng)
    u = rng.random() * f.total
    excursions = generalized_excursions(f, u)
    output = joyal_functional(f, u)
    failures = []
    if abs(sum(excursions.lengths) - f.total) > CHECK_TOLERANCE:
        failures.append("joyal: excursion lengths do not sum to the total")
    if any(np.any(item.path.values < 0.0) for item in excursions.items):
        failures.append("joyal: an excursion dips below its base height")
    if any(len(item.steps) > 2 for item in excursions.items):
        failures.append("joyal: an excursion has more than two pieces")
    if list(excursions.lengths) != sorted(excursions.lengths, reverse=True):
        failures.append("joyal: excursions are not ranked by length")
    lengths = np.array([item.length for item in output.excursions])
    if not np.allclose(np.subtract(output.d, output.g), lengths, atol=CHECK_TOLERANCE):
        failures.append("joyal: d_i - g_i differs from l_i")
    if np.any(np.diff(output.heights) < 0.0):
        failures.append("joyal: output heights decrease")
    return failures


def check_discrete_walks(rng: RngStream) -> list[str]:
    n = int(rng.generator.integers(1, 60))
    p = random_probability(rng, n)
    w = random_weights(rng, n)
    failures = []
    plane = randomize_plane_order(sample_p_tree(p, rng.child(0)), rng.child(1))
    walk = tree_height_walk(plane, p)
    if abs(walk.total - 1.0) > CHECK_TOLERANCE or walk.tag_at(0.0) != plane.root:
        failures.append(f"tree walk n={n}: total or first vertex wrong")
    if not np.array_equal(walk.values, tree_heights(plane.tree)[list(depth_first(plane))]):
        failures.append(f"tree walk n={n}: values are not depths")
    order = depth_first(plane)
    retimed = compose(walk, time_change(order, p), time_change(order, w))
    if not np.allclose(retimed.widths, tree_height_walk(plane, w).widths, atol=1e-12):
        failures.append(f"time change n={n}: composed walk differs from the w-walk")

    mapping = sample_p_mapping(p, rng.child(2))
    ordered = q_biased_order(basin_decomposition(mapping), w, rng.child(3))
    path, marks = mapping_walk(mapping, ordered, ordered.raw.forest_children, w)
    if abs(marks.basin_ends[-1] - path.total) > CHECK_TOLERANCE:
        failures.append(f"mapping walk n={n}: last basin end is not the total")
    if marks.ell.values[-1] != cyclic_points(mapping).size:
        failures.append(f"mapping walk n={n}: ell does not end at the number of cyclic points")
    if sorted(v for basin in ordered.basins for v in basin) != list(range(n)):
        failures.append(f"basins n={n}: basins do not partition the vertices")
    if sample_p_mapping(p, rng.child(2)).key() != mapping.key():
        failures.append(f"determinism n={n}: same stream gave another mapping")
    return failures


def check_hub_family(rng: RngStream) -> list[str]:
    theta = random_theta(rng)
    n = int(rng.generator.integers(50, 400))
    p = hub_family(theta, n)
    s = sigma(p)
    failures = []
    if abs(math.fsum(p.values) - 1.0) > 1e-12:
        failures.append(f"hub family n={n}: probabilities do not sum to 1")
    if any(abs(p.values[i] / s - t) > 1e-12 for i, t in enumerate(theta.thetas)):
        failures.append(f"hub family n={n}: p_i / sigma differs from theta_i")
    if hub_family(theta, 2 * n).values[0] >= p.values[0]:
        failures.append(f"hub family n={n}: largest mass does not decrease with n")
    return failures


def check_limit(rng: RngStream) -> list[str]:
    theta = random_theta(rng)
    stages = exploration_stages(theta, LIMIT_GRID, rng.child(0))
    failures = []
    excursion = stages.excursion.values
    if excursion.min() < 0.0 or excursion[0] != 0.0 or excursion[-1] != 0.0:
        failures.append("vervaat: shifted path is negative or misses its zero endpoints")
    x = stages.excursion.values
    y = stages.reflection.path.values
    for index, _ in stages.excursion.jumps:
        if 0 < index and x[index] > x[index - 1] and abs(y[index] - y[index - 1]) > 1e-9:
            failures.append(f"reflection: jump at grid index {index} survives")
    height = stages.height.values
    if height.min() < -CHECK_TOLERANCE or height[0] != 0.0 or height[-1] != 0.0:
        failures.append("height process is negative or misses its zero endpoints")
    z = limit_Z(stages.height, rng.child(1))
    if abs(z.output.d[-1] - 1.0) > CHECK_TOLERANCE:
        failures.append("Z: excursion durations do not sum to 1")
    if np.any(np.diff(local_time(z).values) < 0.0):
        failures.append("local time decreases")
    ends = set(z.output.d) | {1.0}
    if any(mark not in ends for mark in marks_D(z.output.d, rng.child(2), 5)):
        failures.append("marks D fall outside the excursion ends")
    return failures


def check_stick_breaking(rng: RngStream) -> list[str]:
    theta = random_theta(rng)
    leaves = int(rng.generator.integers(1, 30))
    sticks = sample_stick_breaking(theta, leaves, rng)
    tree = sticks.to_edge_tree()
    failures = []
    leaf_nodes = [v for v in range(tree.size) if tree.kinds[v] == NodeKind.LEAF]
    if len(leaf_nodes) != leaves:
        failures.append(f"stick breaking J={leaves}: wrong number of leaves")
    if abs(tree.total_length - sticks.cutpoints[-1]) > CHECK_TOLERANCE:
        failures.append(f"stick breaking J={leaves}: total length differs from eta_J")
    hubs = [label for label, kind in zip(tree.labels, tree.kinds) if kind == NodeKind.HUB]
    if len(hubs) != len(set(hubs)) or len(hubs) > len(set(sticks.sources) - {OCTANT}):
        failures.append(f"stick breaking J={leaves}: a hub joins at two places")
    reduced = span_reduce(tree, leaf_nodes)
    before, after = tree.leaf_heights(), reduced.leaf_heights()
    if set(before) != set(after) or any(
        abs(before[label] - after[label]) > CHECK_TOLERANCE for label in before
    ):
        failures.append(f"span reduce J={leaves}: leaf heights changed")
    return failures


SUITES: dict[CheckSuite, tuple[Check, ...]] = {
    CheckSuite.BIJECTION: (check_bijection,),
    CheckSuite.LEMJ: (check_walk_identity,),
    CheckSuite.JOYAL: (check_joyal,),
    CheckSuite.INVARIANTS: (
        check_hub_family,
        check_discrete_walks,
        check_joyal,
        check_limit,
        check_stick_breaking,
    ),
}


def run_check(suite: CheckSuite, seed: int, instances: int) -> CheckReport:
    """Run every check of ``suite`` on ``instances`` seeded instances."""
    failures: list[str] = []
    for index in range(instances):
        for offset, check in enumerate(SUITES[suite]):
            failures.extend(check(RngStream(seed, index, (offset,))))
    for failure in failures:
        logger.warning("Check failed: %s", failure)
    logger.info("Suite %s: %s failures over %s instances", suite.value, len(failures), instances)
    return CheckReport(suite=suite, passed=not failures, instances=instances, failures=failures)
