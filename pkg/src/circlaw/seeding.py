"""Reproducible random streams.

Replica ``r`` of a run seeded with ``seed`` draws from a Philox stream keyed by
``SeedSequence(seed, spawn_key=(r,))``, so any partition of replicas across
workers reproduces the serial run exactly.
"""

import numpy as np


def generator(seed, replica=None):
    if replica is None:
        ss = np.random.SeedSequence(int(seed))
    else:
        ss = np.random.SeedSequence(int(seed), spawn_key=(int(replica),))
    return np.random.Generator(np.random.Philox(ss))


def derive(seed, replica):
    """A 64-bit integer seed for replica ``replica``; stable across runs."""
    ss = np.random.SeedSequence(int(seed), spawn_key=(int(replica),))
    return int(ss.generate_state(1, dtype=np.uint64)[0])
