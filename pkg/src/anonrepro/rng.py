"""Deterministic random stream derivation.

One 64-bit master seed drives an entire run.  Every (trial, component) pair
gets its own generator derived through a stateless mix of the seed with the
index path, so results do not depend on execution order: trial 17 draws the
same numbers whether it runs first, last, or on another worker.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1


def substream(master_seed: int, *path: int) -> np.random.Generator:
    """Return the generator for ``path`` under ``master_seed``.

    ``path`` elements are non-negative indices (trial number, component
    number, ...).  The same (seed, path) always yields the same generator.
    """
    entropy = [master_seed & _MASK64, *path]
    return np.random.default_rng(np.random.SeedSequence(entropy))


def split(rng: np.random.Generator, n: int) -> list[np.random.Generator]:
    """Derive ``n`` child generators for the components of a compound value."""
    return list(rng.spawn(n))
