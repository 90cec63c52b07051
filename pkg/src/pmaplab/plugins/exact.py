"""Exact experiments of the catalog.

E1 checks the parent-code bijection and the p-tree law by exhaustive enumeration, E2 compares
the exact law of the number of cyclic points of a p-mapping with the law of one plus the height
of a p-chosen vertex in a p-tree, and E3 checks the coupled walk identity between the modified
Joyal functional of a tree walk and the mapping walk of its Joyal mapping.
"""

import logging
from contextlib import contextmanager
from functools import partial
from typing import Iterator

import numpy as np

from pmaplab.core.errors import ConfigError, TooLarge
from pmaplab.core.models import ExperimentConfig, ExperimentId, ExperimentReport
from pmaplab.core.prob import RankedProb
from pmaplab.core.rng import RngStream
from pmaplab.core.settings import ENUMERATION_HARD_LIMIT, LabSettings
from pmaplab.discrete.enumerate import enumerate_mappings, enumerate_trees
from pmaplab.discrete.mapping import cyclic_points, mapping_probability
from pmaplab.discrete.tree import (
    decode_tree,
    encode_tree,
    randomize_plane_order,
    sample_p_tree,
    tree_heights,
    tree_probability,
)
from pmaplab.harness.replication import Row, column, replicate, to_rows
from pmaplab.harness.reporting import (
    ExperimentRunner,
    build_report,
    family_probability,
    master_seed,
    padded_probability,
    resolve_weights,
)
from pmaplab.harness.stats import tv_finite
from pmaplab.joyal.correspondence import lemma_instance

# Setup module-level logger
logger = logging.getLogger("exact")

EXACT_TOLERANCE = 1e-10


@contextmanager
def _enumerable(n: int) -> Iterator[None]:
    try:
        yield
    except TooLarge as e:
        logger.error("Size %s is too large to enumerate: %s", n, e)
        raise ConfigError(f"Exact experiments need an enumerable size: {e}") from e


def bijection_statistics(
    n: int, p: RankedProb, limit: int = ENUMERATION_HARD_LIMIT
) -> dict[str, float]:
    """Round trips, duplicates, child-count mismatches and total probability over all codes."""
    seen = set()
    roundtrip_failures = count_failures = 0
    total = 0.0
    for tree in enumerate_trees(n, limit):
        code = encode_tree(tree)
        if decode_tree(code, n).key() != tree.key():
            roundtrip_failures += 1
        occurrences = np.bincount(np.asarray(code, dtype=np.int64), minlength=n)
        if not np.array_equal(occurrences, tree.child_count):
            count_failures += 1
        seen.add(tree.key())
        total += tree_probability(p, tree)
    return {
        "roundtrip_failures": float(roundtrip_failures),
        "duplicates": float(n ** (n - 1) - len(seen)),
        "count_failures": float(count_failures),
        "probability_error": abs(total - 1.0),
    }


def cyclic_point_laws(
    n: int, p: RankedProb, limit: int = ENUMERATION_HARD_LIMIT
) -> tuple[np.ndarray, np.ndarray]:
    """Exact laws on 1..n of |C(M)| and of 1 + ht(X) with X ~ p independent of the p-tree."""
    cycles = np.zeros(n + 1)
    for m in enumerate_mappings(n, limit):
        cycles[cyclic_points(m).size] += mapping_probability(p, m)
    heights = np.zeros(n + 1)
    for tree in enumerate_trees(n, limit):
        weight = tree_probability(p, tree)
        np.add.at(heights, tree_heights(tree) + 1, weight * p.values)
    return cycles[1:], heights[1:]


def run_bijection(cfg: ExperimentConfig, settings: LabSettings) -> ExperimentReport:
    """E1."""
    rows: list[Row] = []
    statistics: dict[str, float] = {}
    thresholds: dict[str, float] = {}
    for n in cfg.sizes or [2, 3, 4, 5]:
        logger.info("E1 enumerating trees on %s vertices", n)
        p = padded_probability(cfg.base_p, n)
        with _enumerable(n):
            values = bijection_statistics(n, p, settings.enumeration_limit)
        for name, value in values.items():
            key = f"n{n}_{name}"
            statistics[key] = value
            thresholds[key] = EXACT_TOLERANCE if name == "probability_error" else 0.0
            rows.append((n, name, value))
    return build_report(cfg, rows, statistics, thresholds)


def run_cyclic_identity(cfg: ExperimentConfig, settings: LabSettings) -> ExperimentReport:
    """E2."""
    rows: list[Row] = []
    statistics: dict[str, float] = {}
    for n in cfg.sizes or [3, 4, 5]:
        p = padded_probability(cfg.base_p, n)
        with _enumerable(n):
            cycles, heights = cyclic_point_laws(n, p, settings.enumeration_limit)
        distance = tv_finite(cycles, heights)
        statistics[f"n{n}_tv"] = distance
        rows.append((n, "tv", distance))
        rows.extend((n, f"cycles_{k}", float(v)) for k, v in enumerate(cycles, start=1))
    thresholds = {name: EXACT_TOLERANCE for name in statistics}
    return build_report(cfg, rows, statistics, thresholds)


def lemma_task(
    rng: RngStream, p: RankedProb, w: np.ndarray, q: np.ndarray, tolerance: float
) -> dict[str, float]:
    """One coupled draw of tree, plane order, U and q-stream."""
    tree = sample_p_tree(p, rng.child(0))
    plane = randomize_plane_order(tree, rng.child(1))
    instance = lemma_instance(plane, p, w, rng.child(2).random(), q, rng.child(3))
    return {
        "mismatch": 0.0 if instance.holds(tolerance) else 1.0,
        "cycles": float(len(instance.decomposition.cycles)),
        "spine": float(len(instance.decomposition.cyclic_linear_order)),
    }


def run_walk_identity(cfg: ExperimentConfig, settings: LabSettings) -> ExperimentReport:
    """E3."""
    p = family_probability(cfg)
    task = partial(
        lemma_task,
        p=p,
        w=resolve_weights(cfg.w, p),
        q=resolve_weights(cfg.q, p),
        tolerance=settings.tolerance,
    )
    results = replicate(
        task, master_seed(cfg, settings), cfg.replications, cfg.workers or settings.workers
    )
    statistics = {
        "mismatches": float(sum(column(results, "mismatch"))),
        "mean_cycles": float(np.mean(column(results, "cycles"))),
    }
    return build_report(cfg, to_rows(results), statistics, {"mismatches": 0.0})


def create_exact_catalog() -> dict[ExperimentId, ExperimentRunner]:
    """Exact experiments keyed by catalog id."""
    return {
        ExperimentId.E1: run_bijection,
        ExperimentId.E2: run_cyclic_identity,
        ExperimentId.E3: run_walk_identity,
    }
