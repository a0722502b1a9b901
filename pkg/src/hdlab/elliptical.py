"""Random design matrices under standardized entrywise and elliptical laws.

Three sampling scenarios are supported, all standardized to mean 0 and
unit marginal variance:

* ``gaussian_iid``     -- independent N(0, 1) entries;
* ``laplace_iid``      -- independent Laplace entries with scale 1/sqrt(2);
* ``multivariate_t``   -- rows drawn from a multivariate t with identity
  scale, then rescaled by sqrt((dof - 2)/dof) so each column has unit
  variance (requires dof > 2).

A non-identity covariance turns a sampled row z into Sigma^{1/2} z.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, NumericalDomainError
from .rng import TAG_DESIGN, stream

FAMILIES = ("gaussian_iid", "laplace_iid", "multivariate_t")

_SYM_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class EllipticalSpec:
    """A named design-matrix distribution scenario.

    ``covariance=None`` means the identity; an explicit covariance must be
    a symmetric positive-definite p-by-p matrix.
    """

    family: str
    p: int
    dof: float | None = None
    covariance: np.ndarray | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ConfigurationError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        if self.p < 1:
            raise ConfigurationError(f"p must be >= 1, got {self.p}")
        if self.family == "multivariate_t":
            if self.dof is None:
                raise ConfigurationError("multivariate_t requires dof")
            if not self.dof > 2:
                raise ConfigurationError(
                    f"multivariate_t requires dof > 2 for unit-variance rescaling, got {self.dof}")
        if self.covariance is not None:
            cov = np.asarray(self.covariance, dtype=float)
            if cov.shape != (self.p, self.p):
                raise ConfigurationError(
                    f"covariance shape {cov.shape} does not match p={self.p}")
            if not np.allclose(cov, cov.T, rtol=_SYM_TOL, atol=_SYM_TOL):
                raise ConfigurationError("covariance must be symmetric")
            if np.linalg.eigvalsh(cov)[0] <= 0:
                raise ConfigurationError("covariance must be positive definite")
            object.__setattr__(self, "covariance", cov)


@dataclass(frozen=True, eq=False)
class DesignMatrix:
    """An n-by-p sample with full provenance (spec, seed, replicate)."""

    data: np.ndarray
    spec: EllipticalSpec
    seed: int
    replicate: int

    def __post_init__(self):
        if self.data.ndim != 2 or min(self.data.shape) < 1:
            raise NumericalDomainError(f"design matrix must be 2-D nonempty, got shape {self.data.shape}")
        if not np.all(np.isfinite(self.data)):
            raise NumericalDomainError("design matrix contains non-finite entries")

    @property
    def n(self) -> int:
        return self.data.shape[0]

    @property
    def p(self) -> int:
        return self.data.shape[1]


def unit_variance_scale(dof: float) -> float:
    """Column rescale factor sqrt((dof-2)/dof) giving t rows unit variance."""
    if not dof > 2:
        raise ConfigurationError(f"dof must exceed 2, got {dof}")
    return math.sqrt((dof - 2.0) / dof)


def covariance_sqrt(sigma: np.ndarray) -> np.ndarray:
    """Symmetric square root of an SPD matrix via spectral decomposition."""
    sigma = np.asarray(sigma, dtype=float)
    if sigma.ndim != 2 or sigma.shape[0] != sigma.shape[1]:
        raise NumericalDomainError(f"expected a square matrix, got shape {sigma.shape}")
    if not np.allclose(sigma, sigma.T, rtol=_SYM_TOL, atol=_SYM_TOL):
        raise NumericalDomainError("matrix is not symmetric")
    w, v = np.linalg.eigh(sigma)
    if w[0] <= 0:
        raise NumericalDomainError(f"matrix is not positive definite (lambda_min={w[0]:g})")
    return (v * np.sqrt(w)) @ v.T


def sample_design(spec: EllipticalSpec, n: int, seed: int, replicate: int = 0) -> DesignMatrix:
    """Draw an n-by-p design matrix for the given scenario.

    Bit-identical for identical ``(spec, n, seed, replicate)``: each call
    owns a private counter-based stream and a fixed draw order.
    """
    if n < 1:
        raise ConfigurationError(f"n must be >= 1, got {n}")
    rng = stream(seed, replicate, TAG_DESIGN)
    p = spec.p
    if spec.family == "gaussian_iid":
        z = rng.standard_normal((n, p))
    elif spec.family == "laplace_iid":
        z = rng.laplace(0.0, 1.0 / math.sqrt(2.0), size=(n, p))
    else:  # multivariate_t
        g = rng.standard_normal((n, p))
        mix = rng.chisquare(spec.dof, size=n)
        z = g * np.sqrt(spec.dof / mix)[:, None]
        z *= unit_variance_scale(spec.dof)
    if spec.covariance is not None:
        z = z @ covariance_sqrt(spec.covariance)
    return DesignMatrix(data=z, spec=spec, seed=int(seed), replicate=int(replicate))
