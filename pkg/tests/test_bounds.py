import math

import numpy as np
import pytest

from hdlab.bounds import (BoundParams, correlation_dominance_threshold, log_dimension_bound,
                          log_dimension_bound_refined, noise_predictor_count_bound,
                          separation_rate_constant)
from hdlab.errors import ConfigurationError


def test_worked_arithmetic_values():
    assert log_dimension_bound(BoundParams(n=100, gamma=0.2, delta=0.25)) == pytest.approx(
        120.114, abs=1e-3)
    assert separation_rate_constant(0.1, 0.2) == pytest.approx(0.00098983, abs=1e-8)
    refined = log_dimension_bound_refined(BoundParams(n=100, gamma=0.2, delta=0.25, delta1=0.1))
    assert refined == pytest.approx(125.556, abs=1e-3)
    assert correlation_dominance_threshold(101, 0.5) == pytest.approx(86.006, abs=1e-3)
    assert noise_predictor_count_bound(3, 0.8, 0.6) == pytest.approx(9.583, abs=1e-3)


def test_bound_approaches_two_log_n_as_delta_to_one():
    val = log_dimension_bound(BoundParams(n=100, gamma=0.2, delta=1.0 - 1e-9))
    assert val == pytest.approx(2.0 * math.log(100), abs=1e-5)


def test_bound_monotone_decreasing_in_delta_and_gamma():
    deltas = np.linspace(0.05, 0.95, 10)
    vals = [log_dimension_bound(BoundParams(n=80, gamma=0.3, delta=d)) for d in deltas]
    assert all(a > b for a, b in zip(vals, vals[1:]))
    gammas = np.linspace(0.05, 0.45, 9)
    vals = [log_dimension_bound(BoundParams(n=80, gamma=g, delta=0.3)) for g in gammas]
    assert all(a > b for a, b in zip(vals, vals[1:]))


@pytest.mark.parametrize("gamma", [0.1, 0.2, 0.4])
def test_rate_constant_small_delta1_asymptote(gamma):
    d1 = 1e-3
    ratio = separation_rate_constant(d1, gamma) / (d1 * d1 * gamma / 2.0)
    assert 0.99 <= ratio <= 1.01


def test_rate_constant_near_half_gamma():
    d1 = 0.3
    gamma = 0.5 - 1e-9
    val = separation_rate_constant(d1, gamma)
    first_term = 0.5 * math.log(1.0 / (1.0 - d1 * d1)) * (1.0 - gamma)
    assert val > 0
    assert val == pytest.approx(first_term, rel=1e-6)


def test_refined_bound_limits():
    n, gamma, delta = 100, 0.2, 0.25
    base_coeff = math.log(1.0 / delta) * (1.0 - gamma)
    refined = log_dimension_bound_refined(BoundParams(n=n, gamma=gamma, delta=delta,
                                                      delta1=1e-8))
    expected_coeff = base_coeff - gamma - 0.5 * math.log(1.0 - 2.0 * gamma)
    assert refined == pytest.approx(expected_coeff * n + 2.0 * math.log(n), abs=1e-6)
    # the extra gamma terms vanish as gamma -> 0
    extra = lambda g: -g - 0.5 * math.log(1.0 - 2.0 * g)  # noqa: E731
    assert abs(extra(1e-4)) < 1e-7


def test_refined_bound_requires_delta1():
    with pytest.raises(ConfigurationError):
        log_dimension_bound_refined(BoundParams(n=10, gamma=0.2, delta=0.3))


def test_dominance_threshold_monotone_in_delta():
    deltas = np.linspace(0.05, 0.95, 12)
    vals = [correlation_dominance_threshold(50, d) for d in deltas]
    assert all(a < b for a, b in zip(vals, vals[1:]))


def test_count_bound_limits_and_positivity():
    # r -> 1: the complement ball covers everything, numerator -> 1
    t1 = math.sqrt(1.0 - 0.36) / 2.0
    from hdlab.measures import correlation_ball_volume
    near = noise_predictor_count_bound(7, 1.0 - 1e-12, 0.6)
    assert near == pytest.approx(1.0 / correlation_ball_volume(7, t1), rel=1e-6)
    for n in (5, 20, 80):
        for r in (0.3, 0.6, 0.9):
            for d in (0.2, 0.5, 0.8):
                assert noise_predictor_count_bound(n, r, d) > 0


def test_count_bound_increasing_in_r():
    for n in (10, 40):
        vals = [noise_predictor_count_bound(n, r, 0.5) for r in np.linspace(0.1, 0.95, 9)]
        assert all(a < b for a, b in zip(vals, vals[1:]))


def test_count_bound_tracks_threshold_leading_terms():
    # pilot-measured gap over this grid stays within [0.11, 0.13]; freeze a
    # conservative cap so the leading terms remain consistent
    gap_cap = 0.5
    for n in range(10, 201, 10):
        gap = (math.log(noise_predictor_count_bound(n, 0.8, 0.5))
               - correlation_dominance_threshold(n, 0.5))
        assert gap <= gap_cap


def test_param_validation():
    with pytest.raises(ConfigurationError):
        BoundParams(n=0, gamma=0.2, delta=0.3)
    with pytest.raises(ConfigurationError):
        BoundParams(n=10, gamma=0.6, delta=0.3)
    with pytest.raises(ConfigurationError):
        BoundParams(n=10, gamma=0.2, delta=1.2)
    with pytest.raises(ConfigurationError):
        BoundParams(n=10, gamma=0.2, delta=0.3, delta1=0.4)
    with pytest.raises(ConfigurationError):
        BoundParams(n=10, gamma=0.2, delta=0.3, r=1.5)
    with pytest.raises(ValueError):
        separation_rate_constant(0.0, 0.2)
    with pytest.raises(ValueError):
        correlation_dominance_threshold(1, 0.5)
    with pytest.raises(ValueError):
        noise_predictor_count_bound(10, 0.5, 0.0)
