"""Monte Carlo experiments on spectral concentration of wide design matrices.

The central object is the condition number of width^{-1} X X^T for an
n-by-width matrix with width = c_ratio * n: its distribution across
replicates measures how close the sampled row configuration is to
regular.  Companion checks cover the deviation probability of the extreme
eigenvalues, the concentration of Gaussian vector norms around their
mean (with the analytic sub-Gaussian tail bound and the mean sandwich
sqrt(q) E|Z| <= E||z|| <= sqrt(q)), and the concentration of norm ratios
against an independent Gaussian yardstick.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .elliptical import EllipticalSpec, sample_design
from .errors import ConfigurationError
from .parallel import map_replicates
from .report import ExperimentReport
from .rng import TAG_AUX, stream
from .spectra import gram_extremes

GAUSSIAN_ABS_MEAN = math.sqrt(2.0 / math.pi)  # E|Z| for a standard normal


@dataclass(frozen=True, eq=False)
class ConcentrationConfig:
    """Parameters of one condition-number / deviation experiment."""

    spec: EllipticalSpec
    n: int
    c_ratio: float
    replications: int
    seed: int
    c1: float | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ConfigurationError(f"n must be >= 1, got {self.n}")
        if not self.c_ratio > 1.0:
            raise ConfigurationError(f"c_ratio must exceed 1, got {self.c_ratio}")
        if self.replications < 1:
            raise ConfigurationError(f"replications must be >= 1, got {self.replications}")
        if self.c1 is not None and not self.c1 > 1.0:
            raise ConfigurationError(f"c1 must exceed 1, got {self.c1}")

    @property
    def width(self) -> int:
        return int(round(self.c_ratio * self.n))

    def wide_spec(self) -> EllipticalSpec:
        return replace(self.spec, p=self.width)

    def base_params(self) -> dict:
        params = {"family": self.spec.family, "n": self.n, "width": self.width,
                  "c_ratio": self.c_ratio, "replications": self.replications}
        if self.spec.dof is not None:
            params["dof"] = self.spec.dof
        return params


def _extremes(cfg: ConcentrationConfig, threads: int) -> list:
    spec = cfg.wide_spec()

    def one(r: int):
        x = sample_design(spec, cfg.n, cfg.seed, r)
        return gram_extremes(x.data)

    return map_replicates(one, cfg.replications, threads)


def condition_number_experiment(cfg: ConcentrationConfig, threads: int = 1) -> ExperimentReport:
    """Condition number of width^{-1} X X^T per replicate."""
    values = [s.condition_number for s in _extremes(cfg, threads)]
    return ExperimentReport(name="concentration.condition_number",
                            params=cfg.base_params(), seed=cfg.seed,
                            per_replicate=values)


def deviation_probability(cfg: ConcentrationConfig, threads: int = 1) -> float:
    """Fraction of replicates with lambda_max > c1 or lambda_min < 1/c1."""
    if cfg.c1 is None:
        raise ConfigurationError("deviation probability requires c1")
    hits = sum(1 for s in _extremes(cfg, threads)
               if s.lambda_max > cfg.c1 or s.lambda_min < 1.0 / cfg.c1)
    return hits / cfg.replications


@dataclass(frozen=True)
class NormConcentration:
    """Empirical norm-concentration check against the analytic tail bound."""

    empirical_tail: float
    bound: float
    mean_lower: float
    mean_est: float
    mean_upper: float


def norm_concentration_check(q: int, r: float, samples: int, seed: int) -> NormConcentration:
    """Tail frequency of |  ||z||_2 - mean | > r for Gaussian z in R^q.

    Gaussian input is the one scenario whose log-density curvature constant
    is known to be 1, so the 2 exp(-r^2/2) bound applies as stated.
    """
    if q < 1:
        raise ValueError(f"q must be >= 1, got {q}")
    if r <= 0:
        raise ValueError(f"r must be positive, got {r}")
    if samples < 1000:
        raise ValueError(f"need at least 1000 samples for a meaningful tail, got {samples}")
    z = stream(seed, 0, TAG_AUX).standard_normal((samples, q))
    norms = np.linalg.norm(z, axis=1)
    mean_est = float(np.mean(norms))
    tail = float(np.mean(np.abs(norms - mean_est) > r))
    return NormConcentration(
        empirical_tail=tail,
        bound=2.0 * math.exp(-0.5 * r * r),
        mean_lower=math.sqrt(q) * GAUSSIAN_ABS_MEAN,
        mean_est=mean_est,
        mean_upper=math.sqrt(q),
    )


def ratio_concentration_check(spec: EllipticalSpec, q: int, n: int,
                              samples: int, seed: int) -> ExperimentReport:
    """Distribution of ||z_q|| / ||w|| for scenario draws z against an
    independent Gaussian w of the same dimension.

    Any explicit covariance is dropped: the ratio concerns the spherical
    pre-image of the scenario.
    """
    if n < 1 or q < n:
        raise ValueError(f"need q >= n >= 1, got q={q}, n={n}")
    if samples < 1:
        raise ValueError(f"samples must be >= 1, got {samples}")
    z_spec = replace(spec, p=q, covariance=None)
    z = sample_design(z_spec, samples, seed, 0).data
    w = stream(seed, 0, TAG_AUX).standard_normal((samples, q))
    ratios = (np.linalg.norm(z, axis=1) / np.linalg.norm(w, axis=1)).tolist()
    params = {"family": spec.family, "q": q, "n": n, "samples": samples}
    if spec.dof is not None:
        params["dof"] = spec.dof
    return ExperimentReport(name="concentration.norm_ratio", params=params,
                            seed=seed, per_replicate=ratios)
