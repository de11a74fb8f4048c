# src/utils/rng.py

"""
Seeded random number generation.

Every random draw in the package comes from a `numpy.random.Generator` on top of the
counter-based Philox bit generator, so a (seed, call sequence) pair reproduces the same
numbers on every platform.
"""

from typing import Union

import numpy as np

RNG_ALGORITHM = "Philox"

# Stream identifiers for derive_seed
STREAM_OBJECTIVE = 0
STREAM_OPTIMIZER = 1
STREAM_ORACLE = 2

SeedLike = Union[int, np.random.Generator, None]


def make_rng(seed: SeedLike = None) -> np.random.Generator:
    """
    Returns a Philox-backed generator. Generators are passed through unchanged.
    """
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.Philox(seed))


def derive_seed(master_seed: int, *keys: int) -> int:
    """
    Derives a child seed from a master seed and a tuple of non-negative integer keys,
    e.g. (stream, dimension, trial, optimizer_index).
    """
    sequence = np.random.SeedSequence(entropy=master_seed, spawn_key=tuple(int(k) for k in keys))
    return int(sequence.generate_state(1, dtype=np.uint64)[0])

