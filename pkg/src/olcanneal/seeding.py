"""Seed derivation.

All randomness goes through numpy's PCG64 bit generator.  Child seeds are
derived from a master seed, a stage name and integer indices through
``numpy.random.SeedSequence``; stage names are hashed with CRC-32 so the
derivation does not depend on Python's randomized ``hash``.
"""

import zlib

import numpy as np

PRNG_ALGORITHM = "numpy.PCG64+SeedSequence/crc32-stage-v1"


def _entropy(seed, stage, indices):
    words = [int(seed) & 0xFFFFFFFFFFFFFFFF, zlib.crc32(stage.encode("utf-8"))]
    words.extend(int(i) for i in indices)
    return words


def derive_seed(seed, stage, *indices):
    """Return a 64-bit child seed for ``(seed, stage, *indices)``."""
    ss = np.random.SeedSequence(_entropy(seed, stage, indices))
    lo, hi = ss.generate_state(2, dtype=np.uint32)
    return (int(hi) << 32) | int(lo)


def make_rng(seed):
    return np.random.Generator(np.random.PCG64(int(seed) & 0xFFFFFFFFFFFFFFFF))
