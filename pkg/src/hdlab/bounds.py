"""Closed-form dimensionality bounds under subspace-separation constraints.

Each calculator returns only the computable leading terms of a one-sided
asymptotic statement; the dropped remainders are of constant (or smaller)
order and no finite-n validity is claimed.  Natural logarithms throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConfigurationError, NumericalDomainError
from .measures import correlation_ball_volume


@dataclass(frozen=True)
class BoundParams:
    """Separation parameters: gamma is the subspace/sample ratio, delta half
    the minimum max-chordal distance, delta1 an optional minimum-angle sine
    for disjoint supports, r an optional top true-predictor correlation."""

    n: int
    gamma: float
    delta: float
    delta1: float | None = None
    r: float | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ConfigurationError(f"n must be a positive integer, got {self.n}")
        if not 0.0 < self.gamma < 0.5:
            raise ConfigurationError(f"gamma must lie in (0, 1/2), got {self.gamma}")
        if not 0.0 < self.delta < 1.0:
            raise ConfigurationError(f"delta must lie in (0, 1), got {self.delta}")
        if self.delta1 is not None and not 0.0 < self.delta1 <= self.delta:
            raise ConfigurationError(
                f"delta1 must lie in (0, delta], got {self.delta1} with delta={self.delta}")
        if self.r is not None and not 0.0 < self.r < 1.0:
            raise ConfigurationError(f"r must lie in (0, 1), got {self.r}")


def log_dimension_bound(params: BoundParams) -> float:
    """Leading terms of the log-dimension bound under a max-chordal
    separation of at least 2*delta:  (log 1/delta)(1-gamma) n + 2 log n."""
    return (math.log(1.0 / params.delta) * (1.0 - params.gamma) * params.n
            + 2.0 * math.log(params.n))


def separation_rate_constant(delta1: float, gamma: float) -> float:
    """Exponential-rate gain from a minimum-angle constraint on disjoint
    supports:

        (1/2) log(1/(1-delta1^2)) (1-gamma)
        - (1/2) (1-delta1^2)^(-1) delta1^2 (1-2 gamma).

    Behaves like delta1^2 gamma / 2 as delta1 -> 0.
    """
    if not 0.0 < delta1 < 1.0:
        raise ValueError(f"delta1 must lie in (0, 1), got {delta1}")
    if not 0.0 < gamma < 0.5:
        raise ValueError(f"gamma must lie in (0, 1/2), got {gamma}")
    d2 = delta1 * delta1
    return (0.5 * math.log(1.0 / (1.0 - d2)) * (1.0 - gamma)
            - 0.5 * d2 / (1.0 - d2) * (1.0 - 2.0 * gamma))


def log_dimension_bound_refined(params: BoundParams) -> float:
    """Leading terms of the tightened log-dimension bound when disjoint
    supports additionally keep all principal angles >= arcsin(delta1):

        [(log 1/delta)(1-gamma) - rate - gamma - (1/2) log(1-2 gamma)] n
        + 2 log n.
    """
    if params.delta1 is None:
        raise ConfigurationError("refined bound requires delta1")
    if params.gamma >= 0.5:
        raise NumericalDomainError("gamma must be strictly below 1/2")
    coeff = (math.log(1.0 / params.delta) * (1.0 - params.gamma)
             - separation_rate_constant(params.delta1, params.gamma)
             - params.gamma
             - 0.5 * math.log(1.0 - 2.0 * params.gamma))
    return coeff * params.n + 2.0 * math.log(params.n)


def correlation_dominance_threshold(n: int, delta: float) -> float:
    """log(p - s) level beyond which some noise predictor out-correlates
    every true one:  (1/2) log[4/(1-delta^2)] (n-1) + (1/2) log n.

    Independent of the true-predictor correlation by construction.
    """
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    return 0.5 * math.log(4.0 / (1.0 - delta * delta)) * (n - 1) + 0.5 * math.log(n)


def noise_predictor_count_bound(n: int, r: float, delta: float) -> float:
    """Exact finite-n cap on the number of delta-correlated noise predictors
    compatible with no noise predictor beating correlation r: the volume
    ratio of the complement of a radius-sqrt(1-r^2) ball to a radius-
    sqrt(1-delta^2)/2 ball around the response direction."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if not 0.0 < r < 1.0:
        raise ValueError(f"r must lie in (0, 1), got {r}")
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    t1 = math.sqrt(1.0 - delta * delta) / 2.0
    t2 = math.sqrt(1.0 - r * r)
    return (1.0 - correlation_ball_volume(n, t2)) / correlation_ball_volume(n, t1)
