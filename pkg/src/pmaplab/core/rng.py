"""
Reproducible random streams.

A stream is addressed by ``(master_seed, stream_index)``; the pair is fed to a numpy
``SeedSequence`` as entropy plus spawn key and drives a counter-based Philox generator, so
replications can run in any order or process and still reproduce bit for bit.
"""

import logging
from typing import Sequence

import numpy as np

# Setup logger
logger = logging.getLogger("rng")

_SEED_MASK = (1 << 64) - 1


class RngStream:
    """
    Single-owner random stream.
    """

    def __init__(
        self, master_seed: int, stream_index: int = 0, path: Sequence[int] = ()
    ) -> None:
        self.master_seed = master_seed & _SEED_MASK
        self.stream_index = stream_index
        self.path = tuple(path)
        sequence = np.random.SeedSequence(
            entropy=self.master_seed, spawn_key=(stream_index, *self.path)
        )
        self.generator = np.random.Generator(np.random.Philox(sequence))

    def __repr__(self) -> str:
        return f"RngStream({self.master_seed}, {self.stream_index}, path={self.path})"

    def child(self, tag: int) -> "RngStream":
        """
        Independent sub-stream for one component of a replication.

        Children depend only on the address of the parent and the tag, never on how much of
        the parent has been consumed.
        """
        return RngStream(self.master_seed, self.stream_index, (*self.path, tag))

    def random(self) -> float:
        """One uniform draw on [0, 1)."""
        return float(self.generator.random())

    def choice(self, probabilities: np.ndarray, size: int) -> np.ndarray:
        """Draw ``size`` indices i.i.d. from a probability vector."""
        # inverse CDF on normalized cumulative sums
        cdf = np.cumsum(probabilities)
        cdf /= cdf[-1]
        draws = np.searchsorted(cdf, self.generator.random(size), side="right")
        return np.minimum(draws, len(probabilities) - 1).astype(np.int64)
