"""Deterministic RNG derivation.

Every stochastic routine takes an integer seed and derives independent
streams through ``SeedSequence`` paths, so results do not depend on
execution order or degree of parallelism.
"""

from __future__ import annotations

import numpy as np

# Fixed namespaces for derived streams, so different subsystems that share a
# user seed never collide.
NS_JIGGLE = 1
NS_REFINE = 2
NS_PERMUTATION = 3
NS_REPLICATE = 4
NS_BOOTSTRAP = 5
NS_SAMPLING = 6


def derive_rng(seed: int, *path: int) -> np.random.Generator:
    """Generator for stream ``(seed, *path)``; stable across runs and platforms."""
    entropy = [int(seed) & 0xFFFFFFFFFFFFFFFF] + [int(p) & 0xFFFFFFFFFFFFFFFF for p in path]
    return np.random.default_rng(np.random.SeedSequence(entropy))


def derive_seed(seed: int, *path: int) -> int:
    """Collapse a stream path into a single integer seed."""
    entropy = [int(seed) & 0xFFFFFFFFFFFFFFFF] + [int(p) & 0xFFFFFFFFFFFFFFFF for p in path]
    return int(np.random.SeedSequence(entropy).generate_state(1)[0])
