"""
Seeded fan-out of replications and the CSV row format.
"""

import csv
import logging
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Callable, Iterable

from pmaplab.core.errors import ConfigError
from pmaplab.core.rng import RngStream

# Setup logger
logger = logging.getLogger("replication")

Task = Callable[[RngStream], dict[str, float]]
Row = tuple[int, str, float]

CSV_HEADER = ("rep", "statistic", "value")


def _run_one(task: Task, seed: int, rep: int) -> tuple[int, dict[str, float]]:
    return rep, task(RngStream(seed, rep))


def replicate(
    task: Task, seed: int, reps: int, workers: int = 1
) -> list[tuple[int, dict[str, float]]]:
    """
    Run ``task`` on RngStream(seed, rep) for rep = 0..reps-1, results sorted by rep.

    With ``workers > 1`` the task must be picklable (a module-level function or a partial).
    """
    logger.info("Running %s replications on %s worker(s)", reps, workers)
    if workers <= 1:
        return [_run_one(task, seed, rep) for rep in range(reps)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(_run_one, task, seed, rep) for rep in range(reps)]
        results = [future.result() for future in futures]
    return sorted(results, key=lambda item: item[0])


def to_rows(results: Iterable[tuple[int, dict[str, float]]]) -> list[Row]:
    """Flatten replication results to (rep, statistic, value) rows."""
    return [(rep, name, float(value)) for rep, values in results for name, value in values.items()]


def column(results: Iterable[tuple[int, dict[str, float]]], name: str) -> list[float]:
    """Values of one statistic across replications, skipping replications without it."""
    return [values[name] for _, values in results if name in values]


def write_csv(rows: Iterable[Row], path: str | Path) -> Path:
    """Write rows under the header rep,statistic,value."""
    target = Path(path)
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        with target.open("w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle)
            writer.writerow(CSV_HEADER)
            writer.writerows(rows)
    except OSError as e:
        logger.error("Cannot write %s: %s", target, e)
        raise ConfigError(f"Cannot write results to {target}") from e
    logger.info("Wrote %s", target)
    return target
