"""Sampled-record OU estimators: closed forms, identities, variances."""

import math

import numpy as np
import pytest

from stochpred import _kernels
from stochpred.errors import DegeneratePathError, InvalidParameterError
from stochpred.ou_continuous import mle_m
from stochpred.ou_continuous import OuSufficientStats
from stochpred.ou_sampled import (
    SampledStats,
    bayes_m_sampled,
    clamp_rho,
    cmap1_m,
    cmap2_m,
    cmle_m,
    dominance_m_sampled,
    mle_m_sampled,
    predict_sampled_m,
    predict_sampled_rho,
    rho_bayes,
    rho_cmle,
    var_mean,
    var_mle_m,
)
from stochpred.priors import GaussianPrior
from stochpred.simulate import OuPath, innovation_variance, simulate_ou
from stochpred._rng import RngStream


def _const_path(c, n, step=0.1):
    return OuPath(0.0, 1.0, step, np.full(n + 1, float(c)))


def _stats(values, step, n=None):
    return SampledStats.from_path(OuPath(0.0, 1.0, step, np.asarray(values, float)), n)


# ---------------------------------------------------------------------------
# estimators of the mean
# ---------------------------------------------------------------------------

def test_mle_m_sampled_constant_fixed_point():
    for c in (1.0, -2.5):
        stats = SampledStats.from_path(_const_path(c, 15))
        assert mle_m_sampled(stats, 1.0) == pytest.approx(c, rel=1e-14)


def test_mle_m_sampled_iid_limit():
    # huge step: rho -> 0 and n=1 reduces to the two-point average
    stats = _stats([3.0, 5.0], step=1e3, n=1)
    assert mle_m_sampled(stats, 1.0) == pytest.approx(4.0, rel=1e-12)


def test_bayes_m_sampled_limits_and_value():
    stats = SampledStats.from_path(_const_path(1.0, 15))
    assert bayes_m_sampled(stats, 1.0, GaussianPrior(0.0, 1e12)) == pytest.approx(
        mle_m_sampled(stats, 1.0), rel=1e-9)
    assert bayes_m_sampled(stats, 1.0, GaussianPrior(0.3, 1e-12)) == pytest.approx(0.3, abs=1e-9)
    # direct evaluation at theta=1, delta=0.1, n=15, u2=1, m0=0
    rho = math.exp(-0.1)
    alpha = (15 * (1 - rho) + 1 + rho) / (15 * (1 - rho) + (1 + rho) * 1.5)
    assert bayes_m_sampled(stats, 1.0, GaussianPrior(0.0, 1.0)) == pytest.approx(alpha, rel=1e-12)


def test_bayes_m_sampled_convex_identity():
    rng = np.random.default_rng(8)
    for _ in range(200):
        n = int(rng.integers(2, 60))
        step = rng.uniform(0.05, 0.6)
        theta = rng.uniform(0.2, 3.0)
        vals = rng.normal(size=n + 1).cumsum()
        stats = _stats(vals, step)
        m0, u2 = rng.normal() * 3, rng.uniform(0.05, 5.0)
        rho = math.exp(-theta * step)
        alpha = (n * (1 - rho) + 1 + rho) / (n * (1 - rho) + (1 + rho) * (1 + 1 / (2 * theta * u2)))
        expected = alpha * mle_m_sampled(stats, theta) + (1 - alpha) * m0
        assert bayes_m_sampled(stats, theta, GaussianPrior(m0, u2)) == pytest.approx(expected, rel=1e-10)


def test_cmle_m_examples():
    stats = SampledStats.from_path(_const_path(2.0, 10))
    assert cmle_m(stats, 1.0) == pytest.approx(2.0, rel=1e-13)
    # path (0, 1), one step, rho = 1/2: increment sum 1 over (1-rho) n = 1/2
    stats2 = _stats([0.0, 1.0], step=math.log(2.0), n=1)
    assert cmle_m(stats2, 1.0) == pytest.approx(2.0, rel=1e-13)
    # alternating path: the increments (-1-rho, 1+rho, ...) cancel pairwise
    stats3 = _stats([1.0, -1.0, 1.0, -1.0, 1.0], step=0.2)
    rho = math.exp(-0.2)
    assert stats3.sum_increments(rho) == pytest.approx(0.0, abs=1e-12)
    assert cmle_m(stats3, 1.0) == pytest.approx(0.0, abs=1e-12)


def test_cmap1_direct_value():
    stats = SampledStats.from_path(_const_path(1.0, 20))
    rho = math.exp(-0.1)
    s2 = innovation_variance(1.0, 0.1)
    expected = (20 * (1 - rho) ** 2) / (20 * (1 - rho) ** 2 + s2)
    assert cmap1_m(stats, 1.0, GaussianPrior(0.0, 1.0)) == pytest.approx(expected, rel=1e-12)


def test_cmap1_limits():
    stats = SampledStats.from_path(_const_path(1.0, 20))
    assert cmap1_m(stats, 1.0, GaussianPrior(0.4, 1e-12)) == pytest.approx(0.4, abs=1e-9)
    assert cmap1_m(stats, 1.0, GaussianPrior(0.4, 1e12)) == pytest.approx(
        cmle_m(stats, 1.0), rel=1e-9)


def test_cmap2_beta_weight():
    rho = math.exp(-0.1)
    s2 = innovation_variance(1.0, 0.1)
    beta = (1 - rho) ** 2 / ((1 - rho) ** 2 + s2 / 20.0)
    stats = SampledStats.from_path(_const_path(1.0, 20))
    assert cmap2_m(stats, 1.0, GaussianPrior(0.0, 1.0)) == pytest.approx(beta, rel=1e-12)
    assert beta == pytest.approx(0.66647, abs=5e-5)
    assert cmap2_m(stats, 1.0, GaussianPrior(0.7, 1e12)) == pytest.approx(1.0, rel=1e-9)


def test_cmap2_convex_identity():
    rng = np.random.default_rng(9)
    for _ in range(100):
        n = int(rng.integers(2, 50))
        vals = rng.normal(size=n + 1)
        stats = _stats(vals, 0.1)
        theta, m0, u2 = rng.uniform(0.2, 3.0), rng.normal(), rng.uniform(0.1, 4.0)
        rho = math.exp(-theta * 0.1)
        beta = (1 - rho) ** 2 / ((1 - rho) ** 2 + innovation_variance(theta, 0.1) / (n * u2))
        xbar = vals[1:].sum() / n
        expected = beta * xbar + (1 - beta) * m0
        assert cmap2_m(stats, theta, GaussianPrior(m0, u2)) == pytest.approx(expected, rel=1e-10)


def test_translation_equivariance_of_mean_estimators():
    rng = np.random.default_rng(10)
    vals = rng.normal(size=31)
    theta, step, m0, u2, c = 0.8, 0.2, 1.3, 0.5, 4.75
    base = _stats(vals, step)
    shifted = _stats(vals + c, step)
    prior = GaussianPrior(m0, u2)
    prior_shift = GaussianPrior(m0 + c, u2)
    pairs = [
        (mle_m_sampled(base, theta), mle_m_sampled(shifted, theta)),
        (cmle_m(base, theta), cmle_m(shifted, theta)),
        (bayes_m_sampled(base, theta, prior), bayes_m_sampled(shifted, theta, prior_shift)),
        (cmap1_m(base, theta, prior), cmap1_m(shifted, theta, prior_shift)),
        (cmap2_m(base, theta, prior), cmap2_m(shifted, theta, prior_shift)),
    ]
    for before, after in pairs:
        assert after == pytest.approx(before + c, rel=1e-11, abs=1e-11)


# ---------------------------------------------------------------------------
# closed-form variances and dominance threshold
# ---------------------------------------------------------------------------

def test_var_mle_m_value_and_limits():
    rho = math.exp(-0.1)
    expected = (1 + rho) / (2 * (15 * (1 - rho) + 1 + rho))
    assert var_mle_m(15, 0.1, 1.0) == pytest.approx(expected, rel=1e-14)
    assert expected == pytest.approx(0.28582, abs=5e-6)
    # continuous-record limit 1/(theta (2 + theta S))
    theta, s, n = 1.3, 12.0, 2_000_000
    assert var_mle_m(n, s / n, theta) == pytest.approx(1 / (theta * (2 + theta * s)), rel=1e-5)
    # wide-step limit: independent draws
    assert var_mle_m(9, 1e4, 2.0) == pytest.approx(1 / (2 * 2.0 * 10), rel=1e-9)


def test_var_mean_reduces_to_marginal_variance_at_n1():
    for theta, step in [(1.0, 0.1), (2.0, 0.7), (0.5, 3.0)]:
        assert var_mean(1, step, theta) == pytest.approx(1 / (2 * theta), rel=1e-12)


def test_var_mean_monte_carlo():
    theta, step, n = 1.0, 0.1, 20
    vals = _kernels.ou_paths(606, 10_000, 0.0, theta, step, n)
    xbar = vals[:, 1:].mean(axis=1)
    v = xbar.var(ddof=1)
    se = v * math.sqrt(2.0 / 10_000)
    assert abs(v - var_mean(n, step, theta)) < 3 * se


def test_var_mean_vanishes_with_n():
    assert var_mean(10_000_000, 0.1, 1.0) < 1e-5


def test_var_mle_matches_monte_carlo_grid():
    for theta in (0.5, 1.0, 2.0):
        for step in (0.1, 0.2):
            for n in (15, 50):
                vals = _kernels.ou_paths(515, 10_000, 0.7, theta, step, n)
                stats = SampledStats(
                    n=n, step=step, x0=vals[:, 0], x_end=vals[:, n],
                    sum_interior=vals[:, 1:n].sum(axis=1),
                    sum_all=vals[:, 1:n + 1].sum(axis=1),
                    sum_lag_prod=0.0, sum_lag_sq=1.0)
                est = mle_m_sampled(stats, theta)
                mc = np.mean((est - 0.7) ** 2)
                target = var_mle_m(n, step, theta)
                se = target * math.sqrt(2.0 / 10_000)
                assert abs(mc - target) < 3 * se, (theta, step, n)


def test_dominance_m_sampled_values_and_limits():
    assert dominance_m_sampled(1.0, 15, 0.1, 1.0) == pytest.approx(2 + 0.2858165, abs=5e-6)
    theta, s, n = 1.0, 10.0, 1_000_000
    assert dominance_m_sampled(theta, n, s / n, 1.0) == pytest.approx(
        2 + 1 / (theta * (theta * s + 2)), rel=1e-5)
    assert dominance_m_sampled(1.0, 10_000_000, 1.0, 1.0) == pytest.approx(2.0, rel=1e-6)
    with pytest.raises(InvalidParameterError):
        dominance_m_sampled(1.0, 15, 0.1, 0.0)


# ---------------------------------------------------------------------------
# estimators of the autoregression coefficient
# ---------------------------------------------------------------------------

def test_rho_cmle_examples():
    assert rho_cmle(_stats([2.0, 2.0, 2.0, 2.0], 0.1)) == pytest.approx(1.0, rel=1e-14)
    assert rho_cmle(_stats([1.0, 0.5, 0.25], 0.1)) == pytest.approx(0.5, rel=1e-14)
    assert rho_cmle(_stats([1.0, -1.0, 1.0, -1.0], 0.1)) == pytest.approx(-1.0, rel=1e-14)
    with pytest.raises(DegeneratePathError):
        rho_cmle(_stats([0.0, 0.0, 1.0], 0.1, n=1))


def test_rho_cmle_scale_invariance():
    vals = np.array([0.3, -0.2, 0.9, 1.4, -0.5, 0.1])
    base = rho_cmle(_stats(vals, 0.1))
    for c in (2.0, 0.5, 8.0):  # dyadic scalings are exact in floating point
        assert rho_cmle(_stats(c * vals, 0.1)) == base
    assert rho_cmle(_stats(1.7 * vals, 0.1)) == pytest.approx(base, rel=1e-13)


def test_rho_bayes_example_and_limits():
    stats = _stats([1.0, 1.0, 1.0, 1.0, 1.0], 0.1)
    prior = GaussianPrior(0.9, 0.01)
    assert rho_bayes(stats, prior) == pytest.approx(13 / 14, rel=1e-14)
    assert rho_bayes(stats, GaussianPrior(0.9, 1e12)) == pytest.approx(rho_cmle(stats), rel=1e-9)
    assert rho_bayes(stats, GaussianPrior(0.9, 1e-12)) == pytest.approx(0.9, abs=1e-9)


def test_rho_bayes_convex_identity():
    rng = np.random.default_rng(11)
    for _ in range(100):
        vals = rng.normal(size=int(rng.integers(3, 40)))
        step = rng.uniform(0.05, 0.5)
        stats = _stats(vals, step)
        rho0, v2 = rng.uniform(0.1, 0.95), rng.uniform(0.001, 1.0)
        gamma = stats.sum_lag_sq / (stats.sum_lag_sq + step / v2)
        expected = gamma * rho_cmle(stats) + (1 - gamma) * rho0
        assert rho_bayes(stats, GaussianPrior(rho0, v2)) == pytest.approx(expected, rel=1e-11)


def test_rho_bayes_exact_sigma_variant():
    stats = _stats([1.0, 1.0, 1.0, 1.0, 1.0], 0.1)
    prior = GaussianPrior(0.9, 0.01)
    s2 = innovation_variance(1.0, 0.1)
    got = rho_bayes(stats, prior, sigma2=s2)
    expected = (4 + 0.9 * s2 / 0.01) / (4 + s2 / 0.01)
    assert got == pytest.approx(expected, rel=1e-13)
    assert got != rho_bayes(stats, prior)


def test_clamp_rho():
    assert clamp_rho(1.4) == 1.0
    assert clamp_rho(-0.2) == 0.0
    assert clamp_rho(0.37) == 0.37
    assert np.array_equal(clamp_rho(np.array([-1.0, 0.5, 2.0])), [0.0, 0.5, 1.0])


# ---------------------------------------------------------------------------
# predictors
# ---------------------------------------------------------------------------

def test_predict_sampled_m_examples():
    assert predict_sampled_m(5.0, 6.0, 1.0, 10, 0.1) == pytest.approx(
        5 * (1 - math.exp(-1)) + 6 * math.exp(-1), rel=1e-14)
    assert predict_sampled_m(5.0, 6.0, 1.0, 10 ** 9, 0.1) == pytest.approx(5.0, abs=1e-12)
    for h in (1, 5, 50):
        assert predict_sampled_m(2.0, 2.0, 1.3, h, 0.2) == pytest.approx(2.0, rel=1e-14)


def test_predict_sampled_rho_examples():
    assert predict_sampled_rho(0.7, 3.0, 0) == 3.0
    assert predict_sampled_rho(0.9286, 1.0, 10) == pytest.approx(0.9286 ** 10, rel=1e-14)
    assert predict_sampled_rho(-0.5, 2.0, 2) == pytest.approx(0.5, rel=1e-14)  # even power
    assert predict_sampled_rho(-0.5, 2.0, 3) == pytest.approx(-0.25, rel=1e-14)


# ---------------------------------------------------------------------------
# stats plumbing and cross-module consistency
# ---------------------------------------------------------------------------

def test_sampled_stats_fields():
    vals = np.array([1.0, 2.0, 3.0, 4.0])
    stats = _stats(vals, 0.5)
    assert stats.n == 3 and stats.x0 == 1.0 and stats.x_end == 4.0
    assert stats.sum_interior == 5.0 and stats.sum_all == 9.0
    assert stats.sum_lag_prod == 1 * 2 + 2 * 3 + 3 * 4
    assert stats.sum_lag_sq == 1 + 4 + 9
    prefix = _stats(vals, 0.5, n=2)
    assert prefix.x_end == 3.0 and prefix.sum_all == 5.0 and prefix.sum_interior == 2.0
    with pytest.raises(InvalidParameterError):
        _stats(vals, 0.5, n=4)


def test_sum_increments_matches_direct_path_sum():
    rng = np.random.default_rng(12)
    vals = rng.normal(size=25)
    stats = _stats(vals, 0.1)
    for rho in (0.2, 0.905, 1.1):
        direct = float(np.sum(vals[1:] - rho * vals[:-1]))
        assert stats.sum_increments(rho) == pytest.approx(direct, rel=1e-12, abs=1e-12)


def test_sampled_mle_converges_to_continuous_quadrature():
    # one fine path; coarser subsamples must drift away from the
    # quadrature-based continuous estimate as the step grows
    theta, s = 1.0, 10.0
    fine_step = 0.0125
    path = simulate_ou(0.4, theta, fine_step, int(s / fine_step), RngStream(2030, 0))
    cont = mle_m(OuSufficientStats.from_path(path), theta)
    gaps = []
    for stride in (16, 4, 1):
        sub = OuPath(0.4, theta, fine_step * stride, path.values[::stride])
        gaps.append(abs(mle_m_sampled(SampledStats.from_path(sub), theta) - cont))
    assert gaps[0] > gaps[1] > gaps[2]
    assert gaps[2] < 1e-3
