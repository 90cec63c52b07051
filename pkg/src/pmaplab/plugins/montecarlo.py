"""Monte Carlo experiments of the catalog.

Each experiment draws replications through the seeded harness and compares samples from the
discrete side (p-mappings, p-trees) with samples from the limit side (the height process and
Z^theta, or the stick-breaking tree) by Kolmogorov-Smirnov or total variation distance.
"""

import logging
import math
from functools import partial

import numpy as np

from pmaplab.core.errors import ConfigError, TooLarge
from pmaplab.core.models import ExperimentConfig, ExperimentId, ExperimentReport
from pmaplab.core.prob import RankedProb, ThetaVector, sigma
from pmaplab.core.rng import RngStream
from pmaplab.core.settings import LabSettings
from pmaplab.discrete.basins import basin_decomposition, q_biased_order
from pmaplab.discrete.enumerate import enumerate_mappings
from pmaplab.discrete.mapping import cyclic_points, mapping_probability, sample_p_mapping
from pmaplab.discrete.tree import sample_p_tree
from pmaplab.harness.replication import Task, column, replicate, to_rows
from pmaplab.harness.reporting import (
    ExperimentRunner,
    build_report,
    family_probability,
    master_seed,
    padded_probability,
    resolve_weights,
)
from pmaplab.harness.stats import frequencies, ks_two_sample, tv_finite
from pmaplab.icrt.junc import icrt_junc_stats
from pmaplab.icrt.reduce import rescale, shape_signature, span_reduce
from pmaplab.icrt.stick import sample_stick_breaking, stick_break
from pmaplab.icrt.tree import ROOT_LABEL, EdgeTree, NodeKind
from pmaplab.joyal.correspondence import joyal_correspondence
from pmaplab.limit.exploration import exploration, limit_basin_stats, limit_Z, marks_D

# Setup module-level logger
logger = logging.getLogger("montecarlo")

KS_BASIN = 0.06
KS_MARGINAL = 0.05
TV_PUSHFORWARD = 0.01
TV_SHAPES = 0.05
KS_LENGTH = 0.06
# P(some leg of the two-leaf limit shape is shorter than s) ~ 3 sqrt(pi / 2) s
NON_GENERIC_RATE = 3.0 * math.sqrt(math.pi / 2.0)


def _two_leaf_shape(parent: tuple[int, ...], labels: tuple[str, ...]) -> str:
    kinds = tuple(
        NodeKind.ROOT if v == 0 else NodeKind.LEAF if label else NodeKind.INTERNAL
        for v, label in enumerate(labels)
    )
    lengths = (0.0,) + (1.0,) * (len(parent) - 1)
    return shape_signature(EdgeTree(parent=parent, lengths=lengths, labels=labels, kinds=kinds))


# shapes spanned by the root and two leaves; anything else is degenerate
TWO_LEAF_SHAPES = {
    _two_leaf_shape((-1, 0, 1, 1), (ROOT_LABEL, "", "1+", "2+")): 0,
    _two_leaf_shape((-1, 0, 0), (ROOT_LABEL, "1+", "2+")): 1,
    _two_leaf_shape((-1, 0, 1), (ROOT_LABEL, "1+", "2+")): 2,
    _two_leaf_shape((-1, 0, 1), (ROOT_LABEL, "2+", "1+")): 3,
}
DEGENERATE_SHAPE = len(TWO_LEAF_SHAPES)


def _theta(cfg: ExperimentConfig) -> ThetaVector:
    return cfg.family().theta_vector()


def lattice_spread(count: float, scale: float, rng: RngStream) -> float:
    """scale * (count - U) with U uniform on [0, 1): a lattice value spread over its cell."""
    return scale * (count - rng.random())


def _run(
    cfg: ExperimentConfig, settings: LabSettings, task: Task
) -> list[tuple[int, dict[str, float]]]:
    return replicate(
        task, master_seed(cfg, settings), cfg.replications, cfg.workers or settings.workers
    )


def first_basin_task(
    rng: RngStream,
    p: RankedProb,
    q: np.ndarray,
    theta: ThetaVector,
    grid: int,
    leaves: int,
) -> dict[str, float]:
    """First basin on the discrete side, through Z^theta and through the junc recursion."""
    s = sigma(p)
    mapping = sample_p_mapping(p, rng.child(0))
    ordered = q_biased_order(basin_decomposition(mapping), q, rng.child(1))
    z = limit_Z(exploration(theta, grid, rng.child(2)), rng.child(3))
    mass, level = limit_basin_stats(z, marks_D(z.output.d, rng.child(4), 1))[0]
    junc = icrt_junc_stats(theta, leaves, 1, rng.child(5))
    return {
        "discrete_mass": float(ordered.basin_masses(p.values)[0]),
        "discrete_cycle": lattice_spread(len(ordered.cycles[0]), s, rng.child(6)),
        "discrete_cycle_count": float(len(ordered.cycles[0])),
        "limit_mass": mass,
        "limit_local_time": level,
        "icrt_mass": junc.masses[0],
        "icrt_height": junc.height_increments[0],
    }


def run_first_basin(cfg: ExperimentConfig, settings: LabSettings) -> ExperimentReport:
    """E4."""
    p = family_probability(cfg)
    task = partial(
        first_basin_task,
        p=p,
        q=resolve_weights(cfg.q, p),
        theta=_theta(cfg),
        grid=2**cfg.grid_log2,
        leaves=cfg.leaves,
    )
    results = _run(cfg, settings, task)
    sample = {name: column(results, name) for name in results[0][1]}
    statistics = {
        "ks_mass_discrete_limit": ks_two_sample(sample["discrete_mass"], sample["limit_mass"]),
        "ks_mass_discrete_icrt": ks_two_sample(sample["discrete_mass"], sample["icrt_mass"]),
        "ks_mass_limit_icrt": ks_two_sample(sample["limit_mass"], sample["icrt_mass"]),
        "ks_cycle_icrt": ks_two_sample(sample["discrete_cycle"], sample["icrt_height"]),
        "ks_cycle_limit": ks_two_sample(sample["discrete_cycle"], sample["limit_local_time"]),
    }
    thresholds = {name: KS_BASIN for name in statistics if name != "ks_cycle_limit"}
    return build_report(cfg, to_rows(results), statistics, thresholds)


def cyclic_count_task(rng: RngStream, p: RankedProb, theta: ThetaVector) -> dict[str, float]:
    """sigma(p) |C(M)| next to the first stick length eta_1."""
    mapping = sample_p_mapping(p, rng.child(0))
    sticks = sample_stick_breaking(theta, 1, rng.child(1))
    cycles = cyclic_points(mapping).size
    return {
        "scaled_cycles": lattice_spread(cycles, sigma(p), rng.child(2)),
        "cycles": float(cycles),
        "eta_1": float(sticks.cutpoints[0]),
    }


def run_cyclic_scaling(cfg: ExperimentConfig, settings: LabSettings) -> ExperimentReport:
    """E5."""
    p = family_probability(cfg)
    results = _run(cfg, settings, partial(cyclic_count_task, p=p, theta=_theta(cfg)))
    statistics = {
        "ks": ks_two_sample(column(results, "scaled_cycles"), column(results, "eta_1")),
    }
    return build_report(cfg, to_rows(results), statistics, {"ks": KS_MARGINAL})


def marginal_task(rng: RngStream, p: RankedProb, theta: ThetaVector) -> dict[str, float]:
    """sigma(p) ht(X) for X ~ p in a p-tree next to the root-to-1+ length of T^theta_1."""
    tree = sample_p_tree(p, rng.child(0))
    x = int(rng.child(1).choice(p.values, 1)[0])
    sticks = sample_stick_breaking(theta, 1, rng.child(2))
    depth = tree.depth_of(x)
    return {
        "scaled_height": lattice_spread(depth + 1, sigma(p), rng.child(3)),
        "height": float(depth),
        "eta_1": float(sticks.cutpoints[0]),
    }


def run_marginal(cfg: ExperimentConfig, settings: LabSettings) -> ExperimentReport:
    """E6."""
    p = family_probability(cfg)
    results = _run(cfg, settings, partial(marginal_task, p=p, theta=_theta(cfg)))
    statistics = {
        "ks": ks_two_sample(column(results, "scaled_height"), column(results, "eta_1")),
    }
    return build_report(cfg, to_rows(results), statistics, {"ks": KS_MARGINAL})


def mapping_index(image: np.ndarray, n: int) -> int:
    """Position of a mapping in base-n reading of its image."""
    return int(np.dot(image, n ** np.arange(image.size)))


def pushforward_task(rng: RngStream, p: RankedProb, q: np.ndarray) -> dict[str, float]:
    """Index of the Joyal image of a p-tree with X_1 ~ p."""
    tree = sample_p_tree(p, rng.child(0))
    x1 = int(rng.child(1).choice(p.values, 1)[0])
    mapping, _ = joyal_correspondence(tree, x1, q, rng.child(2))
    return {"mapping": float(mapping_index(mapping.image, p.n))}


def run_pushforward(cfg: ExperimentConfig, settings: LabSettings) -> ExperimentReport:
    """E7."""
    n = cfg.sizes[0] if cfg.sizes else len(cfg.base_p)
    p = padded_probability(cfg.base_p, n)
    try:
        mappings = list(enumerate_mappings(n, settings.enumeration_limit))
    except TooLarge as e:
        raise ConfigError(f"E7 needs an exactly enumerable size: {e}") from e
    exact = {mapping_index(m.image, n): mapping_probability(p, m) for m in mappings}
    results = _run(cfg, settings, partial(pushforward_task, p=p, q=resolve_weights(cfg.q, p)))
    observed = frequencies([int(v) for v in column(results, "mapping")], list(exact))
    statistics = {"tv": tv_finite(observed, exact)}
    return build_report(cfg, to_rows(results), statistics, {"tv": TV_PUSHFORWARD})


def shape_task(rng: RngStream, p: RankedProb, theta: ThetaVector) -> dict[str, float]:
    """Shape and length of sigma(p) r_3(p-tree) and of T^theta_2."""
    tree = sample_p_tree(p, rng.child(0))
    targets = [int(x) for x in rng.child(1).choice(p.values, 2)]
    reduced = rescale(sigma(p), span_reduce(tree, targets))
    limit = stick_break(theta, 2, rng.child(2))
    return {
        "discrete_shape": float(TWO_LEAF_SHAPES.get(shape_signature(reduced), DEGENERATE_SHAPE)),
        "discrete_length": reduced.total_length,
        "icrt_shape": float(TWO_LEAF_SHAPES.get(shape_signature(limit), DEGENERATE_SHAPE)),
        "icrt_length": limit.total_length,
    }


def run_shapes(cfg: ExperimentConfig, settings: LabSettings) -> ExperimentReport:
    """E8."""
    p = family_probability(cfg)
    results = _run(cfg, settings, partial(shape_task, p=p, theta=_theta(cfg)))
    support = list(range(DEGENERATE_SHAPE + 1))
    discrete = frequencies([int(v) for v in column(results, "discrete_shape")], support)
    limit = frequencies([int(v) for v in column(results, "icrt_shape")], support)
    statistics = {
        "tv_shapes": tv_finite(discrete, limit),
        "ks_length": ks_two_sample(
            column(results, "discrete_length"), column(results, "icrt_length")
        ),
    }
    thresholds = {
        "tv_shapes": TV_SHAPES + NON_GENERIC_RATE * sigma(p),
        "ks_length": KS_LENGTH,
    }
    return build_report(cfg, to_rows(results), statistics, thresholds)


def create_montecarlo_catalog() -> dict[ExperimentId, ExperimentRunner]:
    """Monte Carlo experiments keyed by catalog id."""
    return {
        ExperimentId.E4: run_first_basin,
        ExperimentId.E5: run_cyclic_scaling,
        ExperimentId.E6: run_marginal,
        ExperimentId.E7: run_pushforward,
        ExperimentId.E8: run_shapes,
    }
