"""Log-domain volumes for the invariant measure on subspace angles.

The uniform measure on s-dimensional subspaces of R^n, written in the
squared-sine coordinates x_i of the principal angles against a reference
subspace and symmetrized over orderings, is the probability density

    K * prod_{i<j} |x_i - x_j| * prod_i x_i^(alpha-1) * prod_i (1-x_i)^(-1/2)

on [0, 1]^s with alpha = (n - 2s + 1)/2.  The normalizer K and every
derived volume involve products like delta^(s(n-s)) that under/overflow
doubles immediately, so all constants here live in a signed log domain
(:class:`LogValue`).

Two independent routes are provided for each volume: a closed form built
on Aomoto's extension of the Selberg integral, and a tensor quadrature
with endpoint-singularity-aware Gauss-Jacobi panels.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import special

from .errors import NumericalDomainError, ResourceError

_LN_CANCEL = math.log(1e12)


class CancellationWarning(RuntimeWarning):
    """Signed-log addition lost essentially all significant digits."""


@dataclass(frozen=True)
class LogValue:
    """A signed scalar stored as (sign, ln|value|)."""

    sign: int
    log_mag: float

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise ValueError(f"sign must be -1, 0 or +1, got {self.sign}")
        if self.sign == 0:
            object.__setattr__(self, "log_mag", float("-inf"))

    @classmethod
    def from_float(cls, x: float) -> "LogValue":
        if x == 0.0:
            return cls(0, float("-inf"))
        return cls(1 if x > 0 else -1, math.log(abs(x)))

    @classmethod
    def from_log(cls, log_mag: float, sign: int = 1) -> "LogValue":
        return cls(sign, float(log_mag))

    @classmethod
    def zero(cls) -> "LogValue":
        return cls(0, float("-inf"))

    def to_float(self) -> float:
        if self.sign == 0:
            return 0.0
        try:
            mag = math.exp(self.log_mag)
        except OverflowError:
            mag = math.inf
        return self.sign * mag

    def __mul__(self, other: "LogValue") -> "LogValue":
        sign = self.sign * other.sign
        if sign == 0:
            return LogValue.zero()
        return LogValue(sign, self.log_mag + other.log_mag)

    def __neg__(self) -> "LogValue":
        return LogValue(-self.sign, self.log_mag)

    def __add__(self, other: "LogValue") -> "LogValue":
        if self.sign == 0:
            return other
        if other.sign == 0:
            return self
        if self.sign == other.sign:
            return LogValue(self.sign, np.logaddexp(self.log_mag, other.log_mag))
        big, small = (self, other) if self.log_mag >= other.log_mag else (other, self)
        if big.log_mag == small.log_mag:
            warnings.warn("exact cancellation in signed-log addition", CancellationWarning)
            return LogValue.zero()
        log_mag = big.log_mag + math.log1p(-math.exp(small.log_mag - big.log_mag))
        if big.log_mag - log_mag > _LN_CANCEL:
            warnings.warn(
                f"catastrophic cancellation: result is {math.exp(log_mag - big.log_mag):.2e} "
                "of the operand magnitude", CancellationWarning)
        return LogValue(big.sign, log_mag)

    def __sub__(self, other: "LogValue") -> "LogValue":
        return self + (-other)

    def _key(self):
        # orders by true value: negatives by descending magnitude
        return (self.sign, self.sign * self.log_mag if self.sign else 0.0)

    def __lt__(self, other: "LogValue") -> bool:
        return self._key() < other._key()

    def __le__(self, other: "LogValue") -> bool:
        return self._key() <= other._key()

    def __repr__(self) -> str:
        return f"LogValue(sign={self.sign}, log_mag={self.log_mag!r})"


@dataclass(frozen=True)
class MeasureParams:
    """Ambient/subspace dimensions of the angle measure; alpha is derived."""

    n: int
    s: int

    def __post_init__(self):
        if self.n < 2 or self.s < 1:
            raise NumericalDomainError(f"need n >= 2 and s >= 1, got n={self.n}, s={self.s}")
        if self.alpha <= 0:
            raise NumericalDomainError(
                f"alpha = (n - 2s + 1)/2 must be positive for integrability; "
                f"n={self.n}, s={self.s} gives alpha={self.alpha}")

    @property
    def alpha(self) -> float:
        return (self.n - 2 * self.s + 1) / 2.0


def sphere_area_log(j: int) -> LogValue:
    """log of A_j = 2 pi^(j/2) / Gamma(j/2), the surface area of S^(j-1)."""
    if j < 1:
        raise ValueError(f"sphere dimension index must be >= 1, got {j}")
    return LogValue.from_log(math.log(2.0) + 0.5 * j * math.log(math.pi)
                             - special.gammaln(0.5 * j))


def angle_constant_raw_log(n: int, s: int) -> LogValue:
    """Normalizer of the ordered-angle density: prod_i A_{s-i}^2 A_{n-s-i} / (2 A_{n-i}).

    Well defined for 1 <= s <= n - 1; when the product runs into a zero
    sphere area (s beyond n/2 boundary cases) the result is an exact zero.
    """
    if s < 1 or n - s < 1:
        raise ValueError(f"need 1 <= s <= n - 1, got n={n}, s={s}")
    total = 0.0
    for i in range(s):
        if n - s - i == 0:
            return LogValue.zero()
        total += (2.0 * sphere_area_log(s - i).log_mag
                  + sphere_area_log(n - s - i).log_mag
                  - math.log(2.0)
                  - sphere_area_log(n - i).log_mag)
    return LogValue.from_log(total)


def measure_constant_log(n: int, s: int) -> LogValue:
    """Normalizer K of the symmetrized density on [0,1]^s: raw / (2^s s!)."""
    raw = angle_constant_raw_log(n, s)
    if raw.sign == 0:
        return raw
    return LogValue.from_log(raw.log_mag - s * math.log(2.0) - special.gammaln(s + 1.0))


def measure_density_log(x, params: MeasureParams) -> LogValue:
    """Log of the normalized angle-measure density at an interior point."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.shape != (params.s,):
        raise ValueError(f"expected {params.s} coordinates, got shape {x.shape}")
    if np.any(x <= 0.0) or np.any(x >= 1.0):
        raise NumericalDomainError("coordinates must lie strictly inside (0, 1)")
    diffs = x[:, None] - x[None, :]
    iu = np.triu_indices(params.s, k=1)
    gaps = np.abs(diffs[iu])
    if np.any(gaps == 0.0):
        return LogValue.zero()
    log_density = (measure_constant_log(params.n, params.s).log_mag
                   + float(np.sum(np.log(gaps)))
                   + (params.alpha - 1.0) * float(np.sum(np.log(x)))
                   - 0.5 * float(np.sum(np.log1p(-x))))
    return LogValue.from_log(log_density)


def aomoto_integral_log(s: int, alpha: float, c: float) -> LogValue:
    """Closed form of the linear-factor Selberg-type integral

        I(c) = int_[0,1]^s prod_i (1 + c y_i) prod_{i<j} |y_i - y_j|
               prod_i y_i^(alpha-1) dy,

    evaluated entirely in the log domain via Aomoto's extension of the
    Selberg integral (log-gamma products, log-sum-exp over the binomial
    expansion of the linear factors).
    """
    if s < 1:
        raise ValueError(f"s must be >= 1, got {s}")
    if alpha <= 0:
        raise NumericalDomainError(f"alpha must be positive, got {alpha}")
    if c < 0:
        raise ValueError(f"c must be nonnegative, got {c}")
    i = np.arange(s)
    log_gamma_block = float(np.sum(special.gammaln(alpha + 0.5 * i)
                                   + special.gammaln(1.0 + 0.5 * (i + 1))
                                   + special.gammaln(1.0 + 0.5 * i)
                                   - special.gammaln(alpha + 0.5 * (s + i + 1))))
    # ratio ladder: term_m multiplies (alpha + i/2)/(alpha + (s+i+1)/2) for
    # i = s-m .. s-1; build cumulative sums from the top index down
    log_ratio = np.log(alpha + 0.5 * i) - np.log(alpha + 0.5 * (s + i + 1))
    # cumulative from the right: contribution of m terms
    tail = np.concatenate(([0.0], np.cumsum(log_ratio[::-1])))  # tail[m]
    if c == 0.0:
        log_sum = 0.0  # only the m = 0 term survives
    else:
        m = np.arange(s + 1)
        log_binom = (special.gammaln(s + 1.0) - special.gammaln(m + 1.0)
                     - special.gammaln(s - m + 1.0))
        log_terms = log_binom + m * math.log(c) + tail
        log_sum = float(special.logsumexp(log_terms))
    total = s * math.log(2.0) - 0.5 * s * math.log(math.pi) + log_gamma_block + log_sum
    return LogValue.from_log(total)


@dataclass(frozen=True)
class BallVolumeBounds:
    lower: LogValue
    upper: LogValue


def ball_volume_bounds_log(n: int, s: int, delta: float) -> BallVolumeBounds:
    """Certified interval for log of the measure of a max-chordal ball.

    The volume equals delta^(s(n-s)) * K * I(c) for some c between
    delta^2/2 and delta^2 (1-delta^2)^(-3/2) / 2; both endpoints are
    returned since c itself is not pinned down.
    """
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    params = MeasureParams(n, s)
    c_lo = 0.5 * delta ** 2
    c_hi = 0.5 * delta ** 2 * (1.0 - delta ** 2) ** -1.5
    base = LogValue.from_log(s * (n - s) * math.log(delta)) * measure_constant_log(n, s)
    return BallVolumeBounds(lower=base * aomoto_integral_log(s, params.alpha, c_lo),
                            upper=base * aomoto_integral_log(s, params.alpha, c_hi))


def ball_volume_log_leading(n: int, s: int, delta: float) -> float:
    """Leading asymptotic terms of the log ball volume: s(n-s) log delta - s log n.

    The dropped remainder is of order n; never subtract this from the
    exact interval.
    """
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    return s * (n - s) * math.log(delta) - s * math.log(n)


def correlation_ball_volume(n: int, t: float) -> float:
    """Measure of a max-chordal ball of radius t around a line in R^n.

    For one-dimensional subspaces the volume reduces to the regularized
    incomplete beta function I_{t^2}((n-1)/2, 1/2).
    """
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"t must lie in [0, 1], got {t}")
    return float(special.betainc((n - 1) / 2.0, 0.5, t * t))


# ---------------------------------------------------------------------------
# quadrature oracle


@lru_cache(maxsize=None)
def _gauss_rule(kind: str, m: int, exponent: float):
    if kind == "jacobi_both":
        return special.roots_jacobi(m, -0.5, exponent)
    if kind == "jacobi_left":
        return special.roots_jacobi(m, 0.0, exponent)
    if kind == "jacobi_right":
        return special.roots_jacobi(m, -0.5, 0.0)
    return special.roots_legendre(m)


def _panel_rule(u: float, v: float, alpha: float, sqrt_endpoint: bool, m: int):
    """Nodes and weights over [u, v] absorbing x^(alpha-1) and, when requested,
    (1-x)^(-1/2); factors singular at a panel endpoint go into the Gauss-Jacobi
    weight, the rest are folded smoothly."""
    pow_exp = alpha - 1.0
    h = v - u
    sing_left = (u == 0.0) and pow_exp != 0.0
    sing_right = sqrt_endpoint and (v == 1.0)
    if sing_left and sing_right:
        t, w = _gauss_rule("jacobi_both", m, pow_exp)
        x = 0.5 * (t + 1.0)
        wt = w * 2.0 ** (-pow_exp - 0.5)
    elif sing_left:
        t, w = _gauss_rule("jacobi_left", m, pow_exp)
        x = 0.5 * h * (t + 1.0)
        wt = w * (0.5 * h) ** (pow_exp + 1.0)
        if sqrt_endpoint:
            wt = wt / np.sqrt(1.0 - x)
    elif sing_right:
        t, w = _gauss_rule("jacobi_right", m, 0.0)
        x = u + 0.5 * h * (t + 1.0)
        wt = w * (0.5 * h) ** 0.5
        if pow_exp != 0.0:
            wt = wt * x ** pow_exp
    else:
        t, w = _gauss_rule("legendre", m, 0.0)
        x = u + 0.5 * h * (t + 1.0)
        wt = w * 0.5 * h
        if pow_exp != 0.0:
            wt = wt * x ** pow_exp
        if sqrt_endpoint:
            wt = wt / np.sqrt(1.0 - x)
    return x, wt


def vandermonde_quadrature(intervals, alpha: float, *, sqrt_endpoint: bool = True,
                           linear_factor: float | None = None,
                           nodes_per_panel: int = 64) -> float:
    """Tensor quadrature of the unnormalized angle-measure integrand

        prod_{i<j} |x_i - x_j| * prod_i x_i^(alpha-1)
        [* prod_i (1-x_i)^(-1/2)] [* prod_i (1 + c x_i)]

    over a product of intervals inside [0, 1].  Along each axis the
    integration panels are split at the already-fixed coordinates of the
    outer axes, so the |x_i - x_j| kinks never cross a panel interior and
    every panel integrand is smooth against its Gauss-Jacobi weight.
    """
    intervals = [(float(a), float(b)) for a, b in intervals]
    if not intervals:
        raise ValueError("need at least one interval")
    for a, b in intervals:
        if not (0.0 <= a < b <= 1.0):
            raise ValueError(f"interval [{a}, {b}] is not a nonempty subinterval of [0, 1]")
    if alpha <= 0:
        raise NumericalDomainError(f"alpha must be positive, got {alpha}")
    if nodes_per_panel < 64:
        raise ValueError("at least 64 nodes per panel are required")
    last = len(intervals) - 1

    def axis_nodes(d: int, fixed: tuple[float, ...]):
        a, b = intervals[d]
        cuts = sorted({f for f in fixed if a < f < b})
        edges = [a, *cuts, b]
        xs, ws = [], []
        for u, v in zip(edges[:-1], edges[1:]):
            x, w = _panel_rule(u, v, alpha, sqrt_endpoint, nodes_per_panel)
            xs.append(x)
            ws.append(w)
        x = np.concatenate(xs)
        w = np.concatenate(ws)
        if linear_factor is not None:
            w = w * (1.0 + linear_factor * x)
        for f in fixed:
            w = w * np.abs(x - f)
        return x, w

    def integrate(d: int, fixed: tuple[float, ...]) -> float:
        x, w = axis_nodes(d, fixed)
        if d == last:
            return float(np.sum(w))
        return float(sum(wk * integrate(d + 1, fixed + (xk,))
                         for xk, wk in zip(x, w)))

    return integrate(0, ())


def measure_quadrature(n: int, s: int, region=None, nodes_per_panel: int | None = None) -> float:
    """Normalized angle-measure volume of a product region via quadrature.

    Independent of the closed forms above; intended as their oracle.
    Restricted to s <= 3 (tensor cost grows exponentially).  Default node
    counts target absolute error 1e-8 for s <= 2 and 1e-5 for s = 3.
    """
    if s > 3:
        raise ResourceError(f"quadrature is limited to s <= 3, got s={s}")
    if nodes_per_panel is None:
        nodes_per_panel = 128 if s <= 2 else 64
    params = MeasureParams(n, s)
    if region is None:
        region = ((0.0, 1.0),) * s
    region = list(region)
    if len(region) != s:
        raise ValueError(f"expected {s} intervals, got {len(region)}")
    raw = vandermonde_quadrature(region, params.alpha, sqrt_endpoint=True,
                                 nodes_per_panel=nodes_per_panel)
    if raw <= 0.0:
        return 0.0
    return math.exp(measure_constant_log(n, s).log_mag + math.log(raw))
