"""Randomness helpers.

All stochastic code in the library draws from a ``numpy.random.Generator``
passed in explicitly, so results are reproducible from a single integer seed.
Per-trial streams are derived with ``SeedSequence([seed, index])``, which is
stable under extension: adding more trials never changes earlier ones.
"""

from __future__ import annotations

import numpy as np

__all__ = ["make_rng", "trial_rng", "rand_below"]


def make_rng(seed: int | None = None) -> np.random.Generator:
    """Build the root generator for a run (``None`` means OS entropy)."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))


def trial_rng(seed: int, index: int) -> np.random.Generator:
    """Independent stream for trial ``index`` of a seeded batch."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, index])))


def rand_below(rng: np.random.Generator, n: int) -> int:
    """Uniform integer in ``[0, n)`` for arbitrary-precision ``n``."""
    if n <= 0:
        raise ValueError("rand_below needs n >= 1")
    if n <= (1 << 63):
        return int(rng.integers(0, n))
    # Rejection sampling on raw bits keeps the draw exactly uniform.
    nbits = n.bit_length()
    nbytes = (nbits + 7) // 8
    shift = nbytes * 8 - nbits
    while True:
        v = int.from_bytes(rng.bytes(nbytes), "little") >> shift
        if v < n:
            return v
