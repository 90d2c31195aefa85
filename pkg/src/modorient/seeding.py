"""Seed derivation shared by every randomized routine.

Each trial gets its own generator built from ``SeedSequence([master, index])``
so trials can run in any order, or in separate processes, and still
reproduce bit-identically.
"""

import numpy as np

PRNG_NAME = "numpy.PCG64 via SeedSequence([master, stream])"

_MASK64 = (1 << 64) - 1


def make_rng(seed, stream=None):
    """Return a Generator for ``seed``, optionally split off ``stream``."""
    if isinstance(seed, np.random.Generator):
        return seed
    entropy = [int(seed) & _MASK64]
    if stream is not None:
        entropy.append(int(stream) & _MASK64)
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))


def trial_seed(master, index):
    """Derive a 64-bit integer seed for trial ``index`` of ``master``."""
    ss = np.random.SeedSequence([int(master) & _MASK64, int(index) & _MASK64])
    return int(ss.generate_state(1, dtype=np.uint64)[0])
