"""Deterministic random streams.

All randomness in the package flows through :func:`substream` so that results
are reproducible for a given seed and independent of how the work is split
into chunks or processes.  Philox is counter-based: spawning substreams by
key is cheap and streams with different keys never overlap.
"""
from __future__ import annotations

import numpy as np


def substream(seed: int, *key: int) -> np.random.Generator:
    """Return a Generator for the given seed and integer key path.

    Equal (seed, key) pairs always produce identical streams; distinct key
    paths are statistically independent.
    """
    ss = np.random.SeedSequence(entropy=seed, spawn_key=tuple(key))
    return np.random.Generator(np.random.Philox(seed=ss))
