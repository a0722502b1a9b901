import math

import pytest
from scipy.special import gammaln

from hdlab.concentration import (ConcentrationConfig, condition_number_experiment,
                                 deviation_probability, norm_concentration_check,
                                 ratio_concentration_check)
from hdlab.elliptical import EllipticalSpec
from hdlab.errors import ConfigurationError
from hdlab.report import Summary

GAUSS300 = EllipticalSpec("gaussian_iid", p=300)


def _cfg(**kw):
    base = dict(spec=GAUSS300, n=100, c_ratio=3.0, replications=20, seed=7)
    base.update(kw)
    return ConcentrationConfig(**base)


def test_config_validation():
    with pytest.raises(ConfigurationError):
        _cfg(c_ratio=1.0)
    with pytest.raises(ConfigurationError):
        _cfg(replications=0)
    with pytest.raises(ConfigurationError):
        _cfg(c1=0.5)
    assert _cfg(c_ratio=3.0).width == 300


def test_median_condition_number_near_mp_ratio():
    report = condition_number_experiment(_cfg(replications=100), threads=2)
    y = 1.0 / 3.0
    mp_ratio = (1 + math.sqrt(y)) ** 2 / (1 - math.sqrt(y)) ** 2
    assert abs(report.summary.median - mp_ratio) / mp_ratio < 0.25


def test_report_integrity_and_determinism():
    r1 = condition_number_experiment(_cfg())
    r2 = condition_number_experiment(_cfg(), threads=2)
    assert r1.per_replicate == r2.per_replicate
    assert Summary.from_values(r1.per_replicate) == r1.summary


def test_deviation_probability_sentinels():
    assert deviation_probability(_cfg(c1=math.inf)) == 0.0
    assert deviation_probability(_cfg(c1=1.0 + 1e-12)) == 1.0


def test_deviation_probability_pilot_threshold():
    # spectral support of the n=100, width=300 Gaussian Gram is about
    # [0.179, 2.488]; c1 = 6 strictly brackets it, c1 = 4 does not
    # (1/4 > 0.179), so the deviation event is rare vs. near-certain
    cfg6 = _cfg(replications=100, c1=6.0)
    assert deviation_probability(cfg6, threads=2) <= 0.05
    cfg4 = _cfg(replications=100, c1=4.0)
    assert deviation_probability(cfg4, threads=2) >= 0.95


def test_deviation_requires_c1():
    with pytest.raises(ConfigurationError):
        deviation_probability(_cfg())


def test_deviation_monotone_in_n_majority_vote():
    votes = 0
    for seed in (1, 2, 3):
        chain = []
        for n in (100, 200, 400):
            spec = EllipticalSpec("gaussian_iid", p=3 * n)
            cfg = ConcentrationConfig(spec=spec, n=n, c_ratio=3.0, replications=30,
                                      seed=seed, c1=6.0)
            chain.append(deviation_probability(cfg, threads=2))
        if all(chain[i] >= chain[i + 1] for i in range(len(chain) - 1)):
            votes += 1
    assert votes >= 2


def test_heavier_tail_spreads_condition_numbers():
    gauss = condition_number_experiment(_cfg(replications=30))
    t10 = condition_number_experiment(
        _cfg(spec=EllipticalSpec("multivariate_t", p=300, dof=10.0), replications=30))
    assert t10.summary.max > gauss.summary.max


def test_norm_concentration_chi_mean_anchor():
    res = norm_concentration_check(q=4, r=2.0, samples=100_000, seed=1)
    chi_mean = math.sqrt(2.0) * math.exp(gammaln(2.5) - gammaln(2.0))
    assert chi_mean == pytest.approx(1.8800, abs=1e-4)
    assert res.mean_est == pytest.approx(chi_mean, abs=0.01)
    assert res.mean_lower == pytest.approx(math.sqrt(4) * math.sqrt(2 / math.pi), abs=1e-12)
    assert res.mean_upper == 2.0
    assert res.mean_lower <= res.mean_est <= res.mean_upper


@pytest.mark.parametrize("q", [2, 4, 16, 100])
def test_norm_concentration_mean_sandwich(q):
    res = norm_concentration_check(q=q, r=1.5, samples=20_000, seed=3)
    assert res.mean_lower <= res.mean_est <= res.mean_upper


@pytest.mark.parametrize("r", [1.5, 2.0, 3.0])
def test_norm_concentration_tail_bound(r):
    samples = 100_000
    res = norm_concentration_check(q=16, r=r, samples=samples, seed=2)
    slack = 3.0 * math.sqrt(res.bound / samples)
    assert res.empirical_tail <= res.bound + slack


def test_norm_concentration_rejects_tiny_sample():
    with pytest.raises(ValueError):
        norm_concentration_check(q=4, r=1.0, samples=100, seed=0)


def test_ratio_concentration_gaussian_centered_at_one():
    report = ratio_concentration_check(GAUSS300, q=200, n=100, samples=10_000, seed=5)
    assert 0.95 <= report.summary.median <= 1.05


def test_ratio_concentration_degenerate_q1():
    spec = EllipticalSpec("gaussian_iid", p=1)
    report = ratio_concentration_check(spec, q=1, n=1, samples=10_000, seed=6)
    # |z|/|w| for independent standard normals has median exactly 1
    assert abs(report.summary.median - 1.0) < 0.08


def test_ratio_concentration_heavy_tail_wider():
    gauss = ratio_concentration_check(GAUSS300, q=200, n=100, samples=5_000, seed=8)
    t10 = ratio_concentration_check(EllipticalSpec("multivariate_t", p=300, dof=10.0),
                                    q=200, n=100, samples=5_000, seed=8)
    assert t10.summary.iqr > gauss.summary.iqr


def test_ratio_concentration_requires_q_at_least_n():
    with pytest.raises(ValueError):
        ratio_concentration_check(GAUSS300, q=50, n=100, samples=1000, seed=0)
