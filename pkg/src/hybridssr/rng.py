"""Seed derivation so that every work unit owns an independent, reproducible stream."""
from __future__ import annotations

import numpy as np


def seed_sequence(seed) -> np.random.SeedSequence:
    if isinstance(seed, np.random.SeedSequence):
        return seed
    if isinstance(seed, np.random.Generator):
        raise TypeError("pass an integer seed or SeedSequence, not a Generator")
    return np.random.SeedSequence(seed)


def derive_seed(seed, *keys: int) -> np.random.SeedSequence:
    """Child sequence keyed on ``keys``; independent of how many siblings exist."""
    ss = seed_sequence(seed)
    return np.random.SeedSequence(ss.entropy, spawn_key=tuple(ss.spawn_key) + tuple(int(k) for k in keys))


def derive_rng(seed, *keys: int) -> np.random.Generator:
    return np.random.default_rng(derive_seed(seed, *keys))


def fresh_seed() -> int:
    """A new 64-bit seed, meant to be printed so the run can be repeated."""
    return int(np.random.SeedSequence().generate_state(1, np.uint64)[0])
