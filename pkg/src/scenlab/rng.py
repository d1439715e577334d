"""Deterministic, splittable random streams.

Every randomized routine in this package derives one independent stream per
trial by mixing ``(seed, *indices)`` through a 64-bit finalizer.  Trials can
then run in any order (or in parallel) and still produce bit-identical
results.
"""

from __future__ import annotations

import numpy as np

_MASK = 0xFFFFFFFFFFFFFFFF
_GOLDEN = 0x9E3779B97F4A7C15


def mix64(*parts: int) -> int:
    """Mix integer parts into a single 64-bit value (splitmix64 finalizer)."""
    acc = _GOLDEN
    for p in parts:
        acc = (acc ^ (int(p) & _MASK)) & _MASK
        acc = (acc * 0xBF58476D1CE4E5B9) & _MASK
        acc ^= acc >> 27
    z = (acc + _GOLDEN) & _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return (z ^ (z >> 31)) & _MASK


def stream(seed: int, *indices: int) -> np.random.Generator:
    """Independent generator for the given (seed, index...) coordinates."""
    return np.random.default_rng(mix64(seed, *indices))
