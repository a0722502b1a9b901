"""Marginal-correlation screening and its Monte Carlo property checks.

Covariates are ranked by absolute centered Pearson correlation with the
response; retaining the top d of them "screens surely" when the whole
true support survives.  A companion experiment measures how the maximum
spurious correlation of pure-noise covariates grows with their number.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .elliptical import EllipticalSpec, sample_design
from .errors import ConfigurationError
from .parallel import map_replicates
from .report import ExperimentReport
from .rng import TAG_AUX, TAG_RESPONSE, stream

MIN_CORRELATION_N = 3  # below this, centering leaves <= 1 degree of freedom


@dataclass(frozen=True, eq=False)
class ScreeningModel:
    """A sparse linear response on top of a design-matrix scenario."""

    spec: EllipticalSpec
    true_support: tuple[int, ...]
    coefficients: np.ndarray
    noise_sd: float

    def __post_init__(self):
        support = tuple(int(j) for j in self.true_support)
        if len(set(support)) != len(support):
            raise ConfigurationError("true_support indices must be distinct")
        if support and (min(support) < 0 or max(support) >= self.spec.p):
            raise ConfigurationError(f"true_support indices must lie in [0, {self.spec.p})")
        if len(support) >= self.spec.p:
            raise ConfigurationError("true support must be a strict subset of the covariates")
        coef = np.asarray(self.coefficients, dtype=float).reshape(-1)
        if coef.shape != (len(support),):
            raise ConfigurationError(
                f"need one coefficient per support index, got {coef.shape[0]} for {len(support)}")
        if self.noise_sd < 0:
            raise ConfigurationError(f"noise_sd must be nonnegative, got {self.noise_sd}")
        object.__setattr__(self, "true_support", support)
        object.__setattr__(self, "coefficients", coef)

    @property
    def s(self) -> int:
        return len(self.true_support)


_DEAD_COLUMN_RTOL = 1e-12  # centering a constant column leaves O(eps) residue


def _abs_correlations(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    xc = x - x.mean(axis=0)
    yc = y - y.mean()
    ynorm = float(np.linalg.norm(yc))
    if ynorm <= _DEAD_COLUMN_RTOL * float(np.linalg.norm(y)):
        raise ValueError("response has zero sample standard deviation")
    col_norms = np.linalg.norm(xc, axis=0)
    dead = col_norms <= _DEAD_COLUMN_RTOL * np.linalg.norm(x, axis=0)
    if np.any(dead):
        warnings.warn(f"zero-variance columns ranked last: {np.flatnonzero(dead).tolist()}")
        col_norms = np.where(dead, 1.0, col_norms)
    scores = np.abs(xc.T @ yc) / (col_norms * ynorm)
    scores[dead] = -1.0  # below any attainable |correlation|
    return scores


def sis_rank(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Column indices sorted by |correlation with y| descending.

    Exact ties (and zero-variance columns, which sink to the bottom) are
    broken by ascending index, so the permutation is deterministic.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float).reshape(-1)
    if x.ndim != 2 or x.shape[0] != y.shape[0]:
        raise ValueError(f"shape mismatch: X is {x.shape}, y has {y.shape[0]} entries")
    scores = _abs_correlations(x, y)
    return np.argsort(-scores, kind="stable")


def sure_screening_frequency(model: ScreeningModel, n: int, d: int,
                             replications: int, seed: int, threads: int = 1) -> float:
    """Fraction of replicates in which the top-d ranked covariates contain
    the whole true support."""
    if d < model.s:
        raise ValueError(f"retained size d={d} cannot hold a support of size {model.s}")
    if d > model.spec.p:
        raise ValueError(f"retained size d={d} exceeds p={model.spec.p}")
    if n < MIN_CORRELATION_N:
        raise ValueError(f"need n >= {MIN_CORRELATION_N} for correlation ranking, got {n}")
    if model.s == 0:
        return 1.0
    support = set(model.true_support)
    cols = np.asarray(model.true_support)

    def one(r: int) -> float:
        x = sample_design(model.spec, n, seed, r).data
        noise = stream(seed, r, TAG_RESPONSE).standard_normal(n)
        y = x[:, cols] @ model.coefficients + model.noise_sd * noise
        top = sis_rank(x, y)[:d]
        return 1.0 if support.issubset(top.tolist()) else 0.0

    hits = map_replicates(one, replications, threads)
    return float(sum(hits) / replications)


def spurious_max_correlation(n: int, p_noise: int, replications: int,
                             seed: int, threads: int = 1) -> ExperimentReport:
    """Per replicate: max |correlation| between a Gaussian response and
    p_noise independent Gaussian covariates."""
    if n < MIN_CORRELATION_N:
        raise ValueError(
            f"need n >= {MIN_CORRELATION_N}: with fewer observations the centered "
            "correlation is degenerate")
    if p_noise < 1:
        raise ValueError(f"p_noise must be >= 1, got {p_noise}")

    def one(r: int) -> float:
        g = stream(seed, r, TAG_AUX)
        y = g.standard_normal(n)
        x = g.standard_normal((n, p_noise))
        return float(np.max(_abs_correlations(x, y)))

    values = map_replicates(one, replications, threads)
    return ExperimentReport(name="screening.spurious_max_correlation",
                            params={"n": n, "p_noise": p_noise,
                                    "replications": replications},
                            seed=seed, per_replicate=values)
