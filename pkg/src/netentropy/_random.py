"""Seeded random streams.

Every random draw in the package comes from a Philox4x64 counter-based
generator keyed by ``SeedSequence(seed, spawn_key=(stream,))``. Philox and
SeedSequence are bit-reproducible across platforms, and distinct stream ids
give statistically independent sub-streams of the same seed:

    SITES         site coordinates
    CONNECTIVITY  partner picks during connection passes
    RASEE         normal deviates and phases of RaSEE states
    POSITION      normal deviates and phases of random position superpositions

Normal deviates use numpy's ziggurat ``standard_normal``; uniform values use
``Generator.random``.
"""

import numpy as np

SITES = 0
CONNECTIVITY = 1
RASEE = 2
POSITION = 3

_MASK64 = (1 << 64) - 1


def make_rng(seed: int, stream: int) -> np.random.Generator:
    seq = np.random.SeedSequence(int(seed) & _MASK64, spawn_key=(int(stream),))
    return np.random.Generator(np.random.Philox(seq))


def derive_seed(master_seed: int, *keys: int) -> int:
    """Derive a 64-bit child seed from a master seed and a tuple of integer keys."""
    seq = np.random.SeedSequence(int(master_seed) & _MASK64,
                                 spawn_key=tuple(int(k) for k in keys))
    lo, hi = seq.generate_state(2, dtype=np.uint32)
    return int(lo) | (int(hi) << 32)
