"""hdlab: a numerical laboratory for finite-sample high-dimensional design
matrices.

Subpackages cover random design generation under elliptical-type scenarios,
spectral summaries of Gram matrices, Monte Carlo concentration experiments,
robust-spark estimation, principal-angle geometry on subspaces, log-domain
volumes of subspace-angle measures, closed-form dimensionality bounds, and
marginal-correlation screening.
"""

__version__ = "0.1.0"

from .elliptical import DesignMatrix, EllipticalSpec, covariance_sqrt, sample_design
from .spectra import SpectralSummary, gram_extremes, min_singular_of_submatrix
from .report import ExperimentReport, Summary

__all__ = [
    "__version__",
    "DesignMatrix",
    "EllipticalSpec",
    "covariance_sqrt",
    "sample_design",
    "SpectralSummary",
    "gram_extremes",
    "min_singular_of_submatrix",
    "ExperimentReport",
    "Summary",
]
