"""Counter-based random streams keyed by (seed, purpose)."""

import numpy as np

SAMPLING = 0
NOISE = 1
MONTE_CARLO = 2


def make_rng(seed: int, *key: int) -> np.random.Generator:
    """Independent Philox stream for `seed`, split by `key` (e.g. SAMPLING, NOISE)."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=key)))
