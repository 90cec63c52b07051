"""
Empirical samples and the distances used as acceptance statistics.
"""

import logging
from dataclasses import dataclass
from typing import Hashable, Mapping, Sequence

import numpy as np
from scipy import stats

from pmaplab.core.errors import EmptySample, SupportMismatch

# Setup logger
logger = logging.getLogger("stats")


@dataclass(frozen=True, eq=False)
class EmpiricalSample:
    """
    Sorted real sample.
    """

    values: np.ndarray

    @classmethod
    def of(cls, values: Sequence[float] | np.ndarray) -> "EmpiricalSample":
        array = np.sort(np.asarray(values, dtype=np.float64))
        if array.size == 0:
            raise EmptySample("Empirical sample is empty")
        return cls(array)

    @property
    def count(self) -> int:
        return int(self.values.size)

    def cdf(self, x: float | np.ndarray) -> np.ndarray:
        """Empirical distribution function."""
        return np.searchsorted(self.values, x, side="right") / self.count


def _sample(values: "EmpiricalSample | Sequence[float] | np.ndarray") -> EmpiricalSample:
    return values if isinstance(values, EmpiricalSample) else EmpiricalSample.of(values)


def ks_two_sample(
    a: "EmpiricalSample | Sequence[float] | np.ndarray",
    b: "EmpiricalSample | Sequence[float] | np.ndarray",
) -> float:
    """Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|."""
    left, right = _sample(a), _sample(b)
    return float(stats.ks_2samp(left.values, right.values).statistic)


def tv_finite(
    a: Mapping[Hashable, float] | Sequence[float] | np.ndarray,
    b: Mapping[Hashable, float] | Sequence[float] | np.ndarray,
) -> float:
    """Total variation 1/2 sum |a - b| between laws on the same finite support."""
    if isinstance(a, Mapping) and isinstance(b, Mapping):
        if set(a) != set(b):
            raise SupportMismatch("Finite laws are indexed by different supports")
        keys = list(a)
        left = np.array([a[key] for key in keys], dtype=np.float64)
        right = np.array([b[key] for key in keys], dtype=np.float64)
    elif isinstance(a, Mapping) or isinstance(b, Mapping):
        raise SupportMismatch("Cannot compare a keyed law with a positional one")
    else:
        left, right = np.asarray(a, dtype=np.float64), np.asarray(b, dtype=np.float64)
        if left.shape != right.shape:
            raise SupportMismatch(f"Supports of sizes {left.shape} and {right.shape}")
    return float(0.5 * np.sum(np.abs(left - right)))


def frequencies(labels: Sequence[Hashable], support: Sequence[Hashable]) -> dict[Hashable, float]:
    """Empirical law of ``labels`` on ``support``; unseen points get 0."""
    if not labels:
        raise EmptySample("No observations")
    counts = {key: 0 for key in support}
    for label in labels:
        if label not in counts:
            raise SupportMismatch(f"Observation {label!r} outside the support")
        counts[label] += 1
    return {key: count / len(labels) for key, count in counts.items()}


def chi_square_counts(
    observed: Sequence[int] | np.ndarray, expected_probs: Sequence[float] | np.ndarray
) -> tuple[float, float]:
    """Pearson chi-square statistic and p-value of counts against a law."""
    counts = np.asarray(observed, dtype=np.float64)
    probs = np.asarray(expected_probs, dtype=np.float64)
    if counts.shape != probs.shape:
        raise SupportMismatch("Counts and probabilities must share one support")
    if counts.sum() == 0:
        raise EmptySample("No observations")
    result = stats.chisquare(counts, f_exp=probs / probs.sum() * counts.sum())
    return float(result.statistic), float(result.pvalue)
