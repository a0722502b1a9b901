"""Principal angles between subspaces and the derived distances.

Angles are computed from the singular values of the cross-Gram matrix of
two orthonormal bases, with a sine-based recomputation for tiny angles
where arccos of a near-1 cosine is ill conditioned.  Three distances are
derived from the angle vector:

* geodesic      sqrt(sum theta_i^2)
* chordal       sqrt(sum sin^2 theta_i)
* max_chordal   sin theta_1 (the largest angle)

The latter two equal, respectively, 1/sqrt(2) times the Frobenius norm
and the spectral norm of the difference of the orthogonal projectors,
which :func:`projection_distances` computes as an independent route.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInputError

ORTHO_TOL = 1e-10
SMALL_ANGLE = 1e-4
METRICS = ("geodesic", "chordal", "max_chordal")


@dataclass(frozen=True, eq=False)
class Subspace:
    """An s-dimensional subspace of R^n stored as an orthonormal n-by-s basis."""

    basis: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.basis, dtype=float)
        if b.ndim != 2 or not 1 <= b.shape[1] <= b.shape[0]:
            raise ValueError(f"basis must be n-by-s with 1 <= s <= n, got shape {b.shape}")
        gram = b.T @ b
        if np.max(np.abs(gram - np.eye(b.shape[1]))) > ORTHO_TOL:
            raise ValueError("basis columns are not orthonormal")
        object.__setattr__(self, "basis", b)

    @property
    def n(self) -> int:
        return self.basis.shape[0]

    @property
    def s(self) -> int:
        return self.basis.shape[1]

    def projector(self) -> np.ndarray:
        return self.basis @ self.basis.T


@dataclass(frozen=True)
class PrincipalAngleSet:
    """Angles in [0, pi/2] sorted descending: theta_1 >= ... >= theta_s."""

    angles: tuple[float, ...]

    def __post_init__(self):
        a = tuple(float(t) for t in self.angles)
        if any(t < 0.0 or t > math.pi / 2 + 1e-12 for t in a):
            raise ValueError("angles must lie in [0, pi/2]")
        if any(a[i] < a[i + 1] for i in range(len(a) - 1)):
            raise ValueError("angles must be sorted descending")
        object.__setattr__(self, "angles", a)

    @property
    def cosines(self) -> tuple[float, ...]:
        return tuple(math.cos(t) for t in self.angles)

    @property
    def sines(self) -> tuple[float, ...]:
        return tuple(math.sin(t) for t in self.angles)


def orthonormalize(columns: np.ndarray) -> Subspace:
    """Extract an orthonormal basis spanning the given full-rank columns."""
    c = np.asarray(columns, dtype=float)
    if c.ndim != 2 or c.shape[1] < 1:
        raise ValueError(f"expected an n-by-s column matrix, got shape {c.shape}")
    norms = np.linalg.norm(c, axis=0)
    if np.any(norms == 0.0):
        raise DegenerateInputError("zero column in generator matrix")
    smin = np.linalg.svd(c / norms, compute_uv=False)[-1]
    if smin <= 1e-10:
        raise DegenerateInputError(
            f"columns are numerically rank deficient (sigma_min={smin:.3e}); reduce s")
    q, _ = np.linalg.qr(c)
    return Subspace(basis=q)


def _ordered(v1: Subspace, v2: Subspace) -> tuple[Subspace, Subspace]:
    # canonical argument order makes every angle/distance routine exactly
    # symmetric, not merely up to floating-point noise
    k1 = (v1.s, v1.basis.tobytes())
    k2 = (v2.s, v2.basis.tobytes())
    return (v1, v2) if k1 <= k2 else (v2, v1)


def principal_angles(v1: Subspace, v2: Subspace) -> PrincipalAngleSet:
    """Principal angles between two subspaces of a common ambient space."""
    if v1.n != v2.n:
        raise ValueError(f"ambient dimensions differ: {v1.n} vs {v2.n}")
    a, b = _ordered(v1, v2)
    s = min(a.s, b.s)
    cosines = np.linalg.svd(a.basis.T @ b.basis, compute_uv=False)[:s]
    cosines = np.clip(cosines, 0.0, 1.0)
    theta_asc = np.arccos(cosines)  # cosines descending -> angles ascending
    if np.any(theta_asc < SMALL_ANGLE):
        # sine route: singular values of (I - P_a) B_b; the s smallest are
        # the sines of the principal angles
        residual = b.basis - a.basis @ (a.basis.T @ b.basis)
        sines = np.sort(np.linalg.svd(residual, compute_uv=False))[:s]
        sines = np.clip(sines, 0.0, 1.0)
        small = theta_asc < SMALL_ANGLE
        theta_asc[small] = np.arcsin(sines[small])
    return PrincipalAngleSet(angles=tuple(theta_asc[::-1].tolist()))


def distance(v1: Subspace, v2: Subspace, metric: str) -> float:
    """Distance between two subspaces under one of the supported metrics."""
    if metric not in METRICS:
        raise ValueError(f"unknown metric {metric!r}; expected one of {METRICS}")
    theta = np.asarray(principal_angles(v1, v2).angles)
    if metric == "geodesic":
        return float(math.sqrt(np.sum(theta ** 2)))
    if metric == "chordal":
        return float(math.sqrt(np.sum(np.sin(theta) ** 2)))
    return float(np.sin(theta[0]))


def projection_distances(v1: Subspace, v2: Subspace) -> dict[str, float]:
    """Chordal and max-chordal distances computed from projector differences."""
    if v1.n != v2.n:
        raise ValueError(f"ambient dimensions differ: {v1.n} vs {v2.n}")
    if v1.s != v2.s:
        raise ValueError(f"projector route requires equal dimensions, got {v1.s} vs {v2.s}")
    a, b = _ordered(v1, v2)
    diff = a.projector() - b.projector()
    return {
        "chordal": float(np.linalg.norm(diff, "fro") / math.sqrt(2.0)),
        "max_chordal": float(np.linalg.norm(diff, 2)),
    }


def canonical_correlations(v1: Subspace, v2: Subspace) -> tuple[float, ...]:
    """Cosines of the principal angles in ascending-angle order.

    The first entry is the largest correlation (smallest angle).
    """
    theta = principal_angles(v1, v2).angles
    return tuple(math.cos(t) for t in reversed(theta))
