"""Keyed random streams.

Every random quantity in the package is drawn from a Philox generator keyed by
``(seed, kind, *indices)``, so a value depends only on its key and never on the
order in which other values were requested.
"""
from __future__ import annotations

import numpy as np

__all__ = ["keyed_generator", "mix64", "replica_seed", "KIND_GUE", "KIND_XI", "KIND_HAAR", "KIND_MOMENT"]

MASK64 = (1 << 64) - 1

KIND_GUE = 1
KIND_XI = 2
KIND_HAAR = 3
KIND_MOMENT = 4


def keyed_generator(seed: int, kind: int, *indices: int) -> np.random.Generator:
    """Fresh generator whose stream is a pure function of the key."""
    ss = np.random.SeedSequence(int(seed) & MASK64, spawn_key=(int(kind), *map(int, indices)))
    return np.random.Generator(np.random.Philox(ss))


def mix64(k: int) -> int:
    """SplitMix64 finalizer applied to ``k``."""
    z = (int(k) + 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def replica_seed(seed: int, k: int) -> int:
    """Seed of replica ``k``: ``seed XOR mix64(k)``."""
    return (int(seed) & MASK64) ^ mix64(k)
