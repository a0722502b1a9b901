"""Spectral kernels: Gram extremes, condition numbers, submatrix singular values.

Everything works on the n-by-n Gram side (n <= width in all experiments)
with dense symmetric solvers; eigenvalues within -1e-12 of zero are
clamped to zero so "singular" is reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericalDomainError

CLAMP_TOL = 1e-12


@dataclass(frozen=True)
class SpectralSummary:
    lambda_min: float
    lambda_max: float
    condition_number: float


def gram_extremes(x: np.ndarray) -> SpectralSummary:
    """Extreme eigenvalues and condition number of width^{-1} X X^T."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 2 or min(x.shape) < 1:
        raise NumericalDomainError(f"expected a nonempty 2-D matrix, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise NumericalDomainError("matrix contains non-finite entries")
    width = x.shape[1]
    gram = (x @ x.T) / width
    w = np.linalg.eigvalsh(gram)
    lo, hi = float(w[0]), float(w[-1])
    if lo < 0:
        if lo < -CLAMP_TOL:
            raise NumericalDomainError(f"Gram matrix has eigenvalue {lo:g} below clamp tolerance")
        lo = 0.0
    cond = hi / lo if lo > 0 else math.inf
    return SpectralSummary(lambda_min=lo, lambda_max=hi, condition_number=cond)


def min_singular_of_submatrix(x: np.ndarray, columns) -> float:
    """Smallest singular value of n^{-1/2} X restricted to ``columns``.

    Selecting more columns than rows is structurally rank deficient and
    returns 0.0 without computing anything.
    """
    x = np.asarray(x, dtype=float)
    n, p = x.shape
    cols = np.asarray(list(columns), dtype=int)
    if cols.size == 0:
        raise ValueError("column set must be nonempty")
    if len(set(cols.tolist())) != cols.size:
        raise ValueError("column indices must be distinct")
    if cols.min() < 0 or cols.max() >= p:
        raise ValueError(f"column index out of range [0, {p})")
    if cols.size > n:
        return 0.0
    sub = x[:, cols] / math.sqrt(n)
    return float(np.linalg.svd(sub, compute_uv=False)[-1])
