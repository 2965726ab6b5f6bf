"""Seeded random streams.

Every stochastic routine takes a ``seed`` that is turned into a numpy
``Generator`` backed by PCG64.  Substreams for trial ``i`` of a run seeded
with ``s`` come from ``SeedSequence(s, spawn_key=(i,))``, so results do not
depend on how trials are batched or ordered.
"""
from __future__ import annotations

import numpy as np


def make_rng(seed=None) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    if seed is None:
        seed = 0
    if seed < 0 or seed >= 2**64:
        raise ValueError("seed must be a 64-bit unsigned integer")
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def trial_rng(seed: int, index: int) -> np.random.Generator:
    """Independent stream for trial ``index`` of a run seeded with ``seed``."""
    ss = np.random.SeedSequence(seed, spawn_key=(index,))
    return np.random.Generator(np.random.PCG64(ss))
