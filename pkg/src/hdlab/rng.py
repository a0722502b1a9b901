"""Deterministic random streams for parallel Monte Carlo.

Every stochastic routine draws from a counter-based Philox stream keyed by
``(seed, purpose-tag, replicate)``.  Streams are independent by key, so
replicates can run on any number of worker threads in any order and still
produce bit-identical results; nothing ever shares a generator across
replicates.
"""

from __future__ import annotations

import numpy as np

# Purpose tags keep the independent randomness consumers within one
# replicate (matrix entries, submatrix draws, response noise, ...) on
# disjoint streams.  Packed into the high bits of the second key word.
TAG_DESIGN = 0
TAG_SUBSETS = 1
TAG_RESPONSE = 2
TAG_AUX = 3

_TAG_SHIFT = 48
_MAX_REPLICATE = 1 << _TAG_SHIFT


def stream(seed: int, replicate: int = 0, tag: int = TAG_DESIGN) -> np.random.Generator:
    """Return the Generator for one (seed, replicate, tag) cell.

    ``seed`` is reduced modulo 2**64; ``replicate`` must fit below the tag
    bits.  Identical arguments always return an identical stream.
    """
    if replicate < 0 or replicate >= _MAX_REPLICATE:
        raise ValueError(f"replicate must be in [0, 2**{_TAG_SHIFT}), got {replicate}")
    if tag < 0 or tag >= (1 << 15):
        raise ValueError(f"tag must be a small nonnegative integer, got {tag}")
    key = np.array([int(seed) % (1 << 64), (tag << _TAG_SHIFT) | replicate], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))
