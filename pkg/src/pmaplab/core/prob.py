"""
Ranked probability vectors, theta sequences and the hub family.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Sequence

import numpy as np

from .errors import DegenerateTail, InvalidProbability, NotRanked, OutOfRange, WeightMismatch
from .rng import RngStream

if TYPE_CHECKING:
    from .models import FamilySpec

# Setup logger
logger = logging.getLogger("prob")

SUM_TOLERANCE = 1e-12


def _frozen(values: np.ndarray) -> np.ndarray:
    values.setflags(write=False)
    return values


@dataclass(frozen=True, eq=False)
class RankedProb:
    """
    Non-increasing positive probability vector on the labels 0..n-1.
    """

    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=np.float64)
        if values.ndim != 1 or values.size == 0:
            raise InvalidProbability("Probability vector must be a non-empty 1-D array")
        if not np.all(np.isfinite(values)) or np.any(values <= 0.0):
            raise InvalidProbability("Probability vector must be finite and strictly positive")
        if np.any(np.diff(values) > 0.0):
            raise InvalidProbability("Probability vector must be ranked (non-increasing)")
        total = math.fsum(values)
        if abs(total - 1.0) > SUM_TOLERANCE:
            raise InvalidProbability(f"Probability vector sums to {total!r}, not 1")
        object.__setattr__(self, "values", _frozen(values))

    @classmethod
    def from_weights(cls, weights: Sequence[float] | np.ndarray) -> "RankedProb":
        """Rank and renormalize positive weights."""
        raw = np.asarray(weights, dtype=np.float64)
        if raw.ndim != 1 or raw.size == 0 or np.any(raw <= 0.0):
            raise InvalidProbability("Weights must be a non-empty vector of positive numbers")
        ranked = np.sort(raw)[::-1]
        return cls(ranked / math.fsum(ranked))

    @classmethod
    def uniform(cls, n: int) -> "RankedProb":
        """Uniform law on n labels."""
        if n < 1:
            raise InvalidProbability("Uniform law needs n >= 1")
        return cls(np.full(n, 1.0 / n))

    @property
    def n(self) -> int:
        return int(self.values.size)

    def __len__(self) -> int:
        return self.n

    def to_list(self) -> list[float]:
        return [float(v) for v in self.values]


@dataclass(frozen=True)
class ThetaVector:
    """
    Hub weights theta_1 >= ... >= theta_I > 0 with sum of squares below 1.
    """

    thetas: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        thetas = tuple(float(t) for t in self.thetas)
        if any(t <= 0.0 or not math.isfinite(t) for t in thetas):
            raise InvalidProbability("Theta entries must be finite and positive")
        if any(a < b for a, b in zip(thetas, thetas[1:])):
            raise InvalidProbability("Theta entries must be non-increasing")
        if math.fsum(t * t for t in thetas) >= 1.0:
            raise InvalidProbability("Sum of squared theta entries must be below 1")
        object.__setattr__(self, "thetas", thetas)

    @classmethod
    def parse(cls, text: str) -> "ThetaVector":
        """Parse a comma separated list such as ``"0.5,0.3"``; an empty string means I = 0."""
        parts = [part.strip() for part in text.split(",") if part.strip()]
        try:
            return cls(tuple(float(part) for part in parts))
        except ValueError as e:
            if isinstance(e, InvalidProbability):
                raise
            raise InvalidProbability(f"Cannot parse theta vector: {text!r}") from e

    @property
    def size(self) -> int:
        """Number of hubs I."""
        return len(self.thetas)

    @property
    def theta0(self) -> float:
        """Brownian weight sqrt(1 - sum theta_i^2)."""
        return math.sqrt(1.0 - math.fsum(t * t for t in self.thetas))


@dataclass(frozen=True)
class RegimeDiagnostics:
    """
    Numbers describing how close a vector is to the hub regime.
    """

    sigma: float
    hub_ratios: tuple[float, ...]
    max_p: float
    min_p: float
    negligibility_ratio: float
    log_spread: float
    lambdas: tuple[float, ...]
    exact_moments: tuple[float, ...]
    estimated_moments: tuple[float, ...]
    samples: int = field(default=0)


def sigma_unnormalized(values: Sequence[float] | np.ndarray) -> float:
    """Euclidean norm of a positive vector."""
    array = np.asarray(values, dtype=np.float64)
    return float(np.sqrt(np.sum(array * array)))


def sigma(p: RankedProb) -> float:
    """Return sigma(p) = (sum p_i^2)^(1/2)."""
    return sigma_unnormalized(p.values)


def hub_family(theta: ThetaVector, n: int) -> RankedProb:
    """
    Build the vector with I hubs and a uniform tail for which p_i / sigma(p) = theta_i exactly.

    With s = 1 / (theta0 * sqrt(n - I) + sum theta_i) the hubs are theta_i * s and every tail
    entry is s * theta0 / sqrt(n - I); sigma of the result is s.
    """
    hubs = theta.size
    if n < hubs:
        raise OutOfRange(f"Family size n={n} is smaller than the number of hubs {hubs}")
    if n == hubs:
        raise DegenerateTail(f"Family with n={n} and {hubs} hubs has no tail")
    tail_count = n - hubs
    root = math.sqrt(tail_count)
    scale = 1.0 / (theta.theta0 * root + math.fsum(theta.thetas))
    tail_value = scale * theta.theta0 / root
    if hubs and theta.thetas[-1] * scale < tail_value:
        raise NotRanked(
            f"Hub weight {theta.thetas[-1]} falls below the tail at n={n}; "
            "increase n or the smallest theta"
        )
    values = np.empty(n)
    values[:hubs] = np.asarray(theta.thetas) * scale
    values[hubs:] = tail_value
    logger.debug("Hub family n=%s I=%s sigma=%s", n, hubs, scale)
    return RankedProb(values)


def regime_diagnostics(
    p: RankedProb,
    hubs: int,
    rng: RngStream | None = None,
    lambdas: Sequence[float] = (-0.5, -0.25, 0.25, 0.5),
    samples: int = 10_000,
) -> RegimeDiagnostics:
    """
    Report sigma, hub ratios, the extreme masses and the exponential moment checks.

    The moment E[exp(lambda * pbar_xi / sigma^2)] with xi ~ p and pbar zero on the hubs is
    given exactly and as a Monte Carlo estimate from ``samples`` draws.
    """
    if not 0 <= hubs <= p.n:
        raise OutOfRange(f"Hub count {hubs} outside [0, {p.n}]")
    s = sigma(p)
    stream = rng if rng is not None else RngStream(0, 0)
    truncated = p.values.copy()
    truncated[:hubs] = 0.0
    exponents = truncated / (s * s)
    exact = tuple(float(np.dot(p.values, np.exp(lam * exponents))) for lam in lambdas)
    draws = stream.choice(p.values, samples)
    estimated = tuple(float(np.mean(np.exp(lam * exponents[draws]))) for lam in lambdas)
    min_p = float(p.values[-1])
    return RegimeDiagnostics(
        sigma=s,
        hub_ratios=tuple(float(v) / s for v in p.values[:hubs]),
        max_p=float(p.values[0]),
        min_p=min_p,
        negligibility_ratio=float(p.values[hubs]) / s if hubs < p.n else 0.0,
        log_spread=s * math.log(1.0 / min_p),
        lambdas=tuple(float(lam) for lam in lambdas),
        exact_moments=exact,
        estimated_moments=estimated,
        samples=samples,
    )


def make_hub_family(spec: "FamilySpec") -> RankedProb:
    """Hub family described by a serialized family spec."""
    return hub_family(spec.theta_vector(), spec.n)


def weight_vector(w: "RankedProb | np.ndarray | Sequence[float]", n: int) -> np.ndarray:
    """
    Positive weights indexed by vertex, checked against the vertex count n.
    """
    values = w.values if isinstance(w, RankedProb) else np.asarray(w, dtype=np.float64)
    if values.ndim != 1 or values.size != n:
        raise WeightMismatch(f"Expected {n} weights, got shape {values.shape}")
    if np.any(values <= 0.0) or not np.all(np.isfinite(values)):
        raise WeightMismatch("Weights must be finite and strictly positive")
    return values
