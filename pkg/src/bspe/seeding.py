"""Deterministic random streams derived from a single master seed.

Stream `i` is seeded from (master_seed, spawn_key=(i,)), so any stream can be
reconstructed independently of how many other streams exist and in which
order they are drawn.  Aggregations over streams therefore do not depend on
execution order or parallelism.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class RandomSource:
    """Factory of independent, reproducible random generators."""

    master_seed: int

    def __post_init__(self) -> None:
        if isinstance(self.master_seed, bool) or not isinstance(self.master_seed, int):
            raise ValueError(f"master seed must be an integer, got {self.master_seed!r}")
        if self.master_seed < 0:
            raise ValueError(f"master seed must be >= 0, got {self.master_seed}")

    def stream(self, index: int) -> np.random.Generator:
        """Generator for substream `index`, independent of call order."""
        if index < 0:
            raise ValueError(f"stream index must be >= 0, got {index}")
        seq = np.random.SeedSequence(self.master_seed, spawn_key=(index,))
        return np.random.default_rng(seq)
