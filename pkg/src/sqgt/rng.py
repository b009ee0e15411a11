"""Deterministic seeding helpers.

All randomness flows through numpy Generators created from explicit seeds;
there is no global RNG state anywhere in the package. Derived seeds hash the
master seed together with context labels, so independent streams (per sweep
point, per trial) can be reproduced in isolation.
"""

import hashlib

import numpy as np


def derive_seed(master: int, *context) -> int:
    """Stable 64-bit seed from a master seed and arbitrary context labels."""
    h = hashlib.sha256(repr(int(master)).encode())
    for part in context:
        h.update(b"|")
        h.update(repr(part).encode())
    return int.from_bytes(h.digest()[:8], "big")


def make_rng(seed) -> np.random.Generator:
    """Generator from a seed; existing Generators pass through unchanged."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)
