"""Deterministic seed derivation for parallel Monte Carlo runs.

Every slot/trial gets its own generator derived from
(master seed, stream tag, index), so results are bit-identical regardless
of worker count and the derivation is stable across releases.
"""

import numpy as np

# stable stream tags (never renumber)
STREAM_USERS = 1
STREAM_SLOT = 2
STREAM_TRIAL = 3


def derive_rng(master_seed: int, *path: int) -> np.random.Generator:
    """Generator for the stream identified by (master_seed, *path)."""
    return np.random.default_rng(np.random.SeedSequence([int(master_seed), *map(int, path)]))
