"""Replicate-indexed random streams.

Each (seed, replicate_index) pair keys its own counter-based Philox generator
through a SeedSequence spawn key, so replicate r's draws never depend on how
many other replicates exist or in which order they run.
"""

from __future__ import annotations

import numpy as np

from ..errors import InvalidInputError

_SEED_LIMIT = 2**64


def _check_seed(seed: int) -> None:
    if not (0 <= seed < _SEED_LIMIT):
        raise InvalidInputError(f"seed must be an unsigned 64-bit integer, got {seed}")


def derive_stream(seed: int, replicate_index: int) -> np.random.Generator:
    """Independent, deterministic Generator for replicate *replicate_index* of *seed*."""
    _check_seed(seed)
    if replicate_index < 0:
        raise InvalidInputError(f"replicate_index must be >= 0, got {replicate_index}")
    sequence = np.random.SeedSequence(entropy=seed, spawn_key=(replicate_index,))
    return np.random.Generator(np.random.Philox(sequence))


def child_seed(seed: int, *key: int) -> int:
    """A 64-bit master seed for a nested experiment keyed by *key* under *seed*.

    Used where one run drives several independent bootstraps (calibration
    repetitions), each of which then derives its own replicate streams.
    """
    _check_seed(seed)
    state = np.random.SeedSequence(entropy=seed, spawn_key=(1 << 32, *key)).generate_state(1, np.uint64)
    return int(state[0])
