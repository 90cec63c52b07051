"""Sampling commands: discrete structures, walks, the limit process and the ICRT."""

import argparse
import logging
import math
from functools import partial
from pathlib import Path

import numpy as np
from pydantic import ValidationError

from pmaplab.core.dependencies import get_output_dir
from pmaplab.core.errors import ConfigError
from pmaplab.core.models import FamilySpec, SampleFile
from pmaplab.core.prob import RankedProb, ThetaVector, make_hub_family
from pmaplab.core.rng import RngStream
from pmaplab.core.settings import GRID_LOG2_MAX, GRID_LOG2_MIN, LabSettings
from pmaplab.discrete.basins import basin_decomposition, q_biased_order, randomize_forest_order
from pmaplab.discrete.mapping import Mapping, sample_p_mapping
from pmaplab.discrete.tree import sample_p_tree
from pmaplab.harness.replication import replicate, to_rows, write_csv
from pmaplab.harness.reporting import resolve_weights
from pmaplab.icrt.stick import stick_break
from pmaplab.limit.exploration import exploration, limit_basin_stats, limit_Z, marks_D
from pmaplab.walks.height import mapping_walk

from .output import emit

logger = logging.getLogger("samples")

LIMIT_BASINS = 3


def _seed(args: argparse.Namespace, settings: LabSettings) -> int:
    return settings.seed if args.seed is None else int(args.seed)


def _family(args: argparse.Namespace) -> tuple[FamilySpec, RankedProb]:
    theta = ThetaVector.parse(args.theta)
    spec = FamilySpec(theta=list(theta.thetas), n=args.n)
    return spec, make_hub_family(spec)


def sample_tree_command(args: argparse.Namespace, settings: LabSettings) -> int:
    """Draw ``count`` p-trees from a hub family."""
    spec, p = _family(args)
    seed = _seed(args, settings)
    trees = [sample_p_tree(p, RngStream(seed, index)).to_payload() for index in range(args.count)]
    emit(SampleFile(family=spec, seed=seed, p=p.to_list(), trees=trees), args.out)
    return 0


def sample_mapping_command(args: argparse.Namespace, settings: LabSettings) -> int:
    """Draw ``count`` p-mappings from a hub family."""
    spec, p = _family(args)
    seed = _seed(args, settings)
    mappings = [
        sample_p_mapping(p, RngStream(seed, index)).to_payload() for index in range(args.count)
    ]
    emit(SampleFile(family=spec, seed=seed, p=p.to_list(), mappings=mappings), args.out)
    return 0


def _load_samples(path: str) -> SampleFile:
    try:
        return SampleFile.model_validate_json(Path(path).read_text(encoding="utf-8"))
    except OSError as e:
        raise ConfigError(f"Cannot read {path}") from e
    except ValidationError as e:
        raise ConfigError(f"Invalid sample file {path}: {e}") from e


def walk_command(args: argparse.Namespace, settings: LabSettings) -> int:
    """Height walk of a stored mapping, basins ordered by a q-sample."""
    samples = _load_samples(args.input)
    if not 0 <= args.index < len(samples.mappings):
        raise ConfigError(f"No mapping at index {args.index} in {args.input}")
    m = Mapping.from_payload(samples.mappings[args.index])
    p = RankedProb(np.asarray(samples.p, dtype=np.float64))
    rng = RngStream(_seed(args, settings), args.index)
    raw = basin_decomposition(m)
    ordered = q_biased_order(raw, resolve_weights(args.q, p), rng.child(0))
    plane_orders = randomize_forest_order(raw, rng.child(1))
    walk, _ = mapping_walk(m, ordered, plane_orders, resolve_weights(args.w, p))
    emit(walk.to_payload(), args.out)
    return 0


def limit_task(rng: RngStream, theta: ThetaVector, grid: int) -> dict[str, float]:
    """Height process, Z^theta and the first basin statistics for one replication."""
    height = exploration(theta, grid, rng.child(0))
    z = limit_Z(height, rng.child(1))
    stats: dict[str, float] = {
        "max_height": float(height.values.max()),
        "u": z.u,
        "excursions": float(len(z.output.excursions)),
    }
    marks = marks_D(z.output.d, rng.child(2), LIMIT_BASINS)
    basins = limit_basin_stats(z, marks)
    # Fixed columns per replication; basins past D_n = 1 are NaN.
    for j in range(1, LIMIT_BASINS + 1):
        mass, level = basins[j - 1] if j <= len(basins) else (math.nan, math.nan)
        stats[f"mass_{j}"] = mass
        stats[f"local_time_{j}"] = level
    return stats


def limit_command(args: argparse.Namespace, settings: LabSettings) -> int:
    """Replicated draws of the limit process written as CSV rows."""
    theta = ThetaVector.parse(args.theta)
    if args.grid_log2 is None:
        grid = settings.grid_size
    elif GRID_LOG2_MIN <= args.grid_log2 <= GRID_LOG2_MAX:
        grid = 2**args.grid_log2
    else:
        raise ConfigError(
            f"--grid-log2 must lie in [{GRID_LOG2_MIN}, {GRID_LOG2_MAX}], got {args.grid_log2}"
        )
    workers = settings.workers if args.workers is None else args.workers
    task = partial(limit_task, theta=theta, grid=grid)
    results = replicate(task, _seed(args, settings), args.reps, workers)
    out = args.out or str(get_output_dir() / "limit.csv")
    write_csv(to_rows(results), out)
    return 0


def icrt_command(args: argparse.Namespace, settings: LabSettings) -> int:
    """One stick-breaking ICRT as an edge-weighted tree."""
    theta = ThetaVector.parse(args.theta)
    leaves = settings.icrt_leaves if args.leaves is None else args.leaves
    tree = stick_break(theta, leaves, RngStream(_seed(args, settings)))
    emit(tree.to_payload(), args.out)
    return 0


def add_sample_commands(
    subparsers: "argparse._SubParsersAction[argparse.ArgumentParser]",
) -> None:
    """Register the sampling commands."""
    for name, handler, what in (
        ("sample-tree", sample_tree_command, "p-trees"),
        ("sample-mapping", sample_mapping_command, "p-mappings"),
    ):
        command = subparsers.add_parser(name, help=f"sample {what} from a hub family")
        command.add_argument("--n", type=int, required=True, help="number of vertices")
        command.add_argument("--theta", default="", help="hub weights, comma separated")
        command.add_argument("--seed", type=int, default=None)
        command.add_argument("--count", type=int, default=1)
        command.add_argument("--out", default=None, help="JSON output, stdout if omitted")
        command.set_defaults(handler=handler)

    walk = subparsers.add_parser("walk", help="height walk of a stored mapping")
    walk.add_argument("--in", dest="input", required=True, help="sample file from sample-mapping")
    walk.add_argument("--index", type=int, default=0, help="which mapping of the file")
    walk.add_argument("--w", choices=["p", "uniform"], default="p", help="step widths")
    walk.add_argument("--q", choices=["p", "uniform"], default="uniform", help="basin order law")
    walk.add_argument("--seed", type=int, default=None)
    walk.add_argument("--out", default=None)
    walk.set_defaults(handler=walk_command)

    limit = subparsers.add_parser("limit", help="replicate the limit process")
    limit.add_argument("--theta", default="")
    limit.add_argument("--grid-log2", type=int, default=None)
    limit.add_argument("--reps", type=int, default=100)
    limit.add_argument("--workers", type=int, default=None)
    limit.add_argument("--seed", type=int, default=None)
    limit.add_argument("--out", default=None, help="CSV output")
    limit.set_defaults(handler=limit_command)

    icrt = subparsers.add_parser("icrt", help="sample a stick-breaking ICRT")
    icrt.add_argument("--theta", default="")
    icrt.add_argument("--leaves", type=int, default=None)
    icrt.add_argument("--seed", type=int, default=None)
    icrt.add_argument("--out", default=None)
    icrt.set_defaults(handler=icrt_command)
