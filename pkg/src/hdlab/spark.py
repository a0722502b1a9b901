"""Robust-spark machinery: sampled minimum-singular-value experiments, the
exhaustive exact value on tiny matrices, and the lower-bound arithmetic.

The robust spark at threshold c is the smallest k such that some n-by-k
column submatrix of n^{-1/2} X has a singular value below c; it caps the
sparse-model sizes whose subdesigns stay uniformly well conditioned.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from itertools import combinations

import numpy as np

from .elliptical import EllipticalSpec, sample_design
from .errors import ConfigurationError, ResourceError
from .parallel import map_replicates
from .report import ExperimentReport
from .rng import TAG_SUBSETS, stream
from .spectra import min_singular_of_submatrix

EXACT_CAP = 22  # exhaustive enumeration over 2^p subsets; desk-scale limit


def spark_column_count(n: int, p: int) -> int:
    """Submatrix width ceil(2n / log p) used by the sampling experiment
    (natural logarithm)."""
    if p < 2:
        raise ValueError(f"p must be >= 2, got {p}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return math.ceil(2.0 * n / math.log(p))


def spark_lower_bound(n: int, p: int, scale: float) -> float:
    """Lower-bound value scale * n / log p (caller floors as needed)."""
    if p < 2:
        raise ValueError(f"p must be >= 2, got {p}")
    if scale < 0:
        raise ValueError(f"scale must be nonnegative, got {scale}")
    return scale * n / math.log(p)


@dataclass(frozen=True, eq=False)
class SparkConfig:
    """Parameters of one sampled minimum-singular-value experiment."""

    spec: EllipticalSpec
    n: int
    p: int
    replications: int
    seed: int
    submatrix_trials: int = 1000
    k_override: int | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ConfigurationError(f"n must be >= 1, got {self.n}")
        if self.p < 2:
            raise ConfigurationError(f"p must be >= 2, got {self.p}")
        if self.replications < 1:
            raise ConfigurationError(f"replications must be >= 1, got {self.replications}")
        if self.submatrix_trials < 1:
            raise ConfigurationError(
                f"submatrix_trials must be >= 1, got {self.submatrix_trials}")
        if self.column_count > self.p:
            raise ConfigurationError(
                f"submatrix width {self.column_count} exceeds p={self.p}")

    @property
    def column_count(self) -> int:
        if self.k_override is not None:
            if self.k_override < 1:
                raise ConfigurationError(f"k_override must be >= 1, got {self.k_override}")
            return self.k_override
        return spark_column_count(self.n, self.p)


def min_singular_experiment(cfg: SparkConfig, threads: int = 1) -> ExperimentReport:
    """Per replicate: the minimum over uniformly sampled k-column subsets of
    the smallest singular value of n^{-1/2} X restricted to the subset."""
    k = cfg.column_count
    spec = replace(cfg.spec, p=cfg.p)

    def one(r: int) -> float:
        x = sample_design(spec, cfg.n, cfg.seed, r).data
        subset_rng = stream(cfg.seed, r, TAG_SUBSETS)
        best = math.inf
        for _ in range(cfg.submatrix_trials):
            cols = subset_rng.choice(cfg.p, size=k, replace=False)
            best = min(best, min_singular_of_submatrix(x, cols))
        return best

    values = map_replicates(one, cfg.replications, threads)
    params = {"family": cfg.spec.family, "n": cfg.n, "p": cfg.p, "k": k,
              "submatrix_trials": cfg.submatrix_trials,
              "replications": cfg.replications}
    if cfg.spec.dof is not None:
        params["dof"] = cfg.spec.dof
    return ExperimentReport(name="spark.min_singular", params=params,
                            seed=cfg.seed, per_replicate=values)


def robust_spark_exact(x: np.ndarray, c: float) -> int:
    """Exact robust spark by exhaustive subset enumeration.

    Returns the smallest k such that some n-by-k submatrix of n^{-1/2} X
    has a singular value below c, or the sentinel p + 1 when no subset of
    any size qualifies (possible for large c on a fixed finite matrix).
    Capped at p <= 22 columns.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {x.shape}")
    n, p = x.shape
    if p > EXACT_CAP:
        raise ResourceError(f"exhaustive enumeration capped at p <= {EXACT_CAP}, got p={p}")
    if c <= 0:
        raise ValueError(f"threshold c must be positive, got {c}")
    gram = (x.T @ x) / n  # Gram of n^{-1/2} X, normalization applied once
    indices = range(p)
    prev_level_min = math.inf
    for k in range(1, p + 1):
        level_min = math.inf
        for cols in combinations(indices, k):
            ix = np.asarray(cols)
            lam = float(np.linalg.eigvalsh(gram[np.ix_(ix, ix)])[0])
            level_min = min(level_min, math.sqrt(max(lam, 0.0)))
        # appending a column can only shrink the minimum singular value
        if level_min > prev_level_min + 1e-9:
            raise AssertionError(
                f"interlacing violated at k={k}: {level_min} > {prev_level_min}")
        prev_level_min = level_min
        if level_min < c:
            return k
    return p + 1
