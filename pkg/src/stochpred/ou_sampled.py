"""Inference from discrete OU samples ``X_0, X_step, ..., X_{n*step}``.

Five estimators of the stationary mean (rate known) and two estimators of
the autoregression coefficient ``rho = exp(-theta * step)`` (mean known),
with their closed-form variances, dominance thresholds and plug-in h-step
predictors.

As elsewhere, statistic fields may be scalars or ndarrays; the formulas
are elementwise, so the harness pushes whole replicate batches through
them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegeneratePathError, InvalidParameterError
from .priors import GaussianPrior
from .simulate import OuPath, innovation_variance


@dataclass(frozen=True)
class SampledStats:
    """Sample sums of one path prefix, built by a single canonical pass.

    ``sum_interior`` is ``sum_{i=1}^{n-1} X_i``, ``sum_all`` is
    ``sum_{i=1}^{n} X_i``, and the lag sums run over pairs
    ``(X_{i-1}, X_i)`` for ``i = 1 .. n``.
    """

    n: int
    step: float
    x0: float
    x_end: float
    sum_interior: float
    sum_all: float
    sum_lag_prod: float
    sum_lag_sq: float

    @classmethod
    def from_path(cls, path: OuPath, n: int | None = None) -> "SampledStats":
        v = np.asarray(path.values, dtype=np.float64)
        if n is None:
            n = v.size - 1
        if not 1 <= n <= v.size - 1:
            raise InvalidParameterError(f"n must be in [1, {v.size - 1}], got {n}")
        cums = np.cumsum(v)
        lag_prod = np.cumsum(v[:-1] * v[1:])
        lag_sq = np.cumsum(v[:-1] * v[:-1])
        return cls(n=n, step=path.step, x0=float(v[0]), x_end=float(v[n]),
                   sum_interior=float(cums[n - 1] - v[0]),
                   sum_all=float(cums[n] - v[0]),
                   sum_lag_prod=float(lag_prod[n - 1]),
                   sum_lag_sq=float(lag_sq[n - 1]))

    def sum_increments(self, rho: float):
        """``sum_{i=1}^n (X_i - rho X_{i-1})``, derived from the stored sums."""
        return self.sum_all - rho * (self.x0 + self.sum_interior)


def _rho(theta: float, step: float) -> float:
    if theta <= 0:
        raise InvalidParameterError(f"theta must be > 0, got {theta}")
    if step <= 0:
        raise InvalidParameterError(f"step must be > 0, got {step}")
    return math.exp(-theta * step)


def mle_m_sampled(stats: SampledStats, theta: float):
    """Full-likelihood MLE of the mean.

    ``(X_0 + X_n + (1-rho) sum_interior) / (n (1-rho) + 1 + rho)``.
    """
    rho = _rho(theta, stats.step)
    num = stats.x0 + stats.x_end + (1.0 - rho) * stats.sum_interior
    den = stats.n * (1.0 - rho) + 1.0 + rho
    return num / den


def bayes_m_sampled(stats: SampledStats, theta: float, prior: GaussianPrior):
    """Posterior mean of ``m`` under ``N(m0, u^2)``, full likelihood.

    Adds ``(1+rho) m0 / (2 theta u^2)`` to the MLE numerator and
    ``(1+rho)(1 + 1/(2 theta u^2))`` replaces ``1 + rho`` in the
    denominator.
    """
    rho = _rho(theta, stats.step)
    w = 1.0 / (2.0 * theta * prior.variance)
    num = stats.x0 + stats.x_end + (1.0 - rho) * stats.sum_interior + (1.0 + rho) * prior.mean * w
    den = stats.n * (1.0 - rho) + (1.0 + rho) * (1.0 + w)
    return num / den


def cmle_m(stats: SampledStats, theta: float):
    """Conditional (on ``X_0``) MLE: ``sum(X_i - rho X_{i-1}) / ((1-rho) n)``."""
    rho = _rho(theta, stats.step)
    return stats.sum_increments(rho) / ((1.0 - rho) * stats.n)


def cmap1_m(stats: SampledStats, theta: float, prior: GaussianPrior):
    """Conditional-likelihood Bayes estimator of the mean.

    ``((1-rho) sum(X_i - rho X_{i-1}) + m0 sigma^2/u^2) /
    ((1-rho)^2 n + sigma^2/u^2)`` with the innovation variance sigma^2.
    """
    rho = _rho(theta, stats.step)
    s2u = innovation_variance(theta, stats.step) / prior.variance
    num = (1.0 - rho) * stats.sum_increments(rho) + prior.mean * s2u
    den = (1.0 - rho) ** 2 * stats.n + s2u
    return num / den


def cmap2_m(stats: SampledStats, theta: float, prior: GaussianPrior):
    """Shrunk sample mean ``beta_n Xbar + (1 - beta_n) m0``.

    ``beta_n = (1-rho)^2 / ((1-rho)^2 + sigma^2 / (n u^2))``.
    """
    rho = _rho(theta, stats.step)
    one_m = (1.0 - rho) ** 2
    beta = one_m / (one_m + innovation_variance(theta, stats.step) / (stats.n * prior.variance))
    xbar = stats.sum_all / stats.n
    return beta * xbar + (1.0 - beta) * prior.mean


def var_mle_m(n: int, step: float, theta: float) -> float:
    """Exact variance of the full-likelihood mean MLE.

    ``(1+rho) / (2 theta (n (1-rho) + 1 + rho))``; as ``n -> inf`` with
    ``n step -> S`` it tends to the continuous-record value
    ``1 / (theta (2 + theta S))``.
    """
    rho = _rho(theta, step)
    return (1.0 + rho) / (2.0 * theta * (n * (1.0 - rho) + 1.0 + rho))


def var_mean(n: int, step: float, theta: float) -> float:
    """Exact variance of the sample mean ``Xbar_n`` of a stationary OU.

    ``((1 - e^{-2 theta d}) + (2/n) e^{-theta d} (e^{-theta n d} - 1)) /
    (2 n theta (1 - e^{-theta d})^2)``.
    """
    rho = _rho(theta, step)
    num = (1.0 - rho * rho) + (2.0 / n) * rho * (math.exp(-theta * n * step) - 1.0)
    return num / (2.0 * n * theta * (1.0 - rho) ** 2)


def dominance_m_sampled(theta: float, n: int, step: float, u2: float) -> float:
    """Threshold on ``(m - m0)^2`` below which Bayes beats the MLE predictor.

    ``2 u^2 + (1+rho) / (2 theta (1 + rho + n (1-rho)))``; tends to
    ``2 u^2 + 1/(theta (theta S + 2))`` and then ``2 u^2`` as the record
    grows.
    """
    if u2 <= 0:
        raise InvalidParameterError(f"u2 must be > 0, got {u2}")
    return 2.0 * u2 + var_mle_m(n, step, theta)


def rho_cmle(stats: SampledStats):
    """Least-squares estimate ``sum X_{i-1} X_i / sum X_{i-1}^2``, unclamped."""
    if np.any(np.asarray(stats.sum_lag_sq) <= 0):
        raise DegeneratePathError("sum_lag_sq must be > 0")
    return stats.sum_lag_prod / stats.sum_lag_sq


def rho_bayes(stats: SampledStats, prior: GaussianPrior, sigma2: float | None = None):
    """Shrunk autoregression coefficient under ``N(rho0, v^2)``.

    The default follows the printed formula, which approximates the
    innovation variance by ``step`` itself:
    ``(sum X_{i-1} X_i + rho0 step/v^2) / (sum X_{i-1}^2 + step/v^2)``.
    Passing ``sigma2`` replaces that approximation (e.g. with the exact
    innovation variance) for sensitivity studies.
    """
    if stats.step <= 0:
        raise InvalidParameterError(f"step must be > 0, got {stats.step}")
    s2 = stats.step if sigma2 is None else sigma2
    w = s2 / prior.variance
    return (stats.sum_lag_prod + prior.mean * w) / (stats.sum_lag_sq + w)


def clamp_rho(rho_est):
    """Opt-in clamp of a raw coefficient estimate into [0, 1]."""
    return np.clip(rho_est, 0.0, 1.0)


def predict_sampled_m(m_est, x_end, theta: float, h_steps: int, step: float):
    """Plug-in h-step predictor ``m_est (1 - rho^h) + rho^h X_n``."""
    if theta <= 0:
        raise InvalidParameterError(f"theta must be > 0, got {theta}")
    w = math.exp(-theta * h_steps * step)
    return m_est * (1.0 - w) + w * x_end


def predict_sampled_rho(rho_est, x_end, h_steps: int):
    """Plug-in h-step predictor ``rho_est^h X_n`` for the known-mean model.

    Negative estimates are used as-is (sign alternates with the horizon).
    """
    return rho_est ** h_steps * x_end
