"""Shared test helpers: independent oracles kept deliberately separate from
the library code paths they check."""

from __future__ import annotations

import numpy as np

from hdlab.grassmann import Subspace, orthonormalize


def exhaustive_spark(x: np.ndarray, c_values) -> dict[float, int]:
    """Robust spark by brute bitmask enumeration, SVD route, no early exit.

    Independent of hdlab.spark.robust_spark_exact: iterates every nonempty
    column subset in mask order and takes a plain minimum.
    """
    x = np.asarray(x, dtype=float)
    n, p = x.shape
    xn = x / np.sqrt(n)
    best = {float(c): p + 1 for c in c_values}
    for mask in range(1, 1 << p):
        cols = [j for j in range(p) if (mask >> j) & 1]
        if len(cols) > n:
            smin = 0.0
        else:
            smin = float(np.min(np.linalg.svd(xn[:, cols], compute_uv=False)))
        for c in best:
            if smin < c and len(cols) < best[c]:
                best[c] = len(cols)
    return best


def random_subspace(rng: np.random.Generator, n: int, s: int) -> Subspace:
    return orthonormalize(rng.standard_normal((n, s)))


def random_orthogonal(rng: np.random.Generator, n: int) -> np.ndarray:
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(r))
