"""Seeded randomness.

Every random operation in the package takes an explicit integer seed and
draws from :class:`random.Random` (MT19937) seeded with the seed reduced
mod 2**64.  CPython's Mersenne Twister seeding from an int is identical on
every platform, so runs are bit-reproducible.
"""

from __future__ import annotations

import random

SEED_MASK = (1 << 64) - 1
DEFAULT_SEED = 20240101


def make_rng(seed: int | None = None) -> random.Random:
    if seed is None:
        seed = DEFAULT_SEED
    return random.Random(int(seed) & SEED_MASK)


def derive_seed(seed: int, *labels: int | str) -> int:
    """Deterministic child seed for independent sub-streams."""
    rng = make_rng(seed)
    acc = rng.getrandbits(64)
    for label in labels:
        for ch in str(label):
            acc = (acc * 1099511628211 + ord(ch)) & SEED_MASK
        acc = (acc ^ (acc >> 29)) & SEED_MASK
    return acc
