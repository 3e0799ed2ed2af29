"""Inference from a (finely discretized) continuous OU record.

Covers the two one-parameter problems: estimating the stationary mean
``m`` when the reversion rate is known, and estimating the rate when the
mean is known (taken as 0).  Everything is driven by the sufficient
statistics ``(X_0, X_S, S, int X dt, int X^2 dt)``; in practice the
integrals come from trapezoid quadrature on a refined simulation grid.

Functions accept scalar or ndarray statistic fields and operate
elementwise, so the Monte Carlo harness evaluates full replicate batches
through these same formulas.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special as _spec

from .errors import DegeneratePathError, InvalidParameterError
from .priors import GaussianPrior, TranslatedExpPrior
from .simulate import OuPath, path_integrals

_SQRT2 = math.sqrt(2.0)
_SQRT_2_OVER_PI = math.sqrt(2.0 / math.pi)
#: switch to the scaled-erfc form of the Mills ratio above this argument
_MILLS_SWITCH = 8.0


@dataclass(frozen=True)
class OuSufficientStats:
    """Record endpoints, length and the two time integrals."""

    x0: float
    x_end: float
    s: float
    int_x: float
    int_x2: float

    @classmethod
    def from_path(cls, path: OuPath) -> "OuSufficientStats":
        int_x, int_x2 = path_integrals(path)
        return cls(x0=float(path.values[0]), x_end=float(path.values[-1]),
                   s=(len(path.values) - 1) * path.step, int_x=int_x, int_x2=int_x2)


def mle_m(stats: OuSufficientStats, theta: float):
    """MLE of the mean: ``(X_0 + X_S + theta int X) / (2 + theta S)``."""
    if theta <= 0:
        raise InvalidParameterError(f"theta must be > 0, got {theta}")
    return (stats.x0 + stats.x_end + theta * stats.int_x) / (2.0 + theta * stats.s)


def bayes_m(stats: OuSufficientStats, theta: float, prior: GaussianPrior):
    """Posterior mean of ``m`` under a Gaussian prior.

    Computed as ``B / A`` with ``A = theta (2 + theta S) + 1/u^2`` and
    ``B = theta Z_S + m0 / u^2``; equivalently the convex combination
    ``alpha_S * mle + (1 - alpha_S) * m0`` with
    ``alpha_S = (1 + (2 + theta S)^-1 u^-2 / theta)^-1``.
    """
    if theta <= 0:
        raise InvalidParameterError(f"theta must be > 0, got {theta}")
    z = stats.x0 + stats.x_end + theta * stats.int_x
    a = theta * (2.0 + theta * stats.s) + 1.0 / prior.variance
    b = theta * z + prior.mean / prior.variance
    return b / a


def predict_m_known_theta(m_est, x_end, theta: float, h: float):
    """Plug-in predictor ``m_est (1 - e^{-theta h}) + e^{-theta h} X_S``."""
    if theta <= 0:
        raise InvalidParameterError(f"theta must be > 0, got {theta}")
    if h < 0:
        raise InvalidParameterError(f"h must be >= 0, got {h}")
    w = math.exp(-theta * h)
    return m_est * (1.0 - w) + w * x_end


def dominance_bound_m(theta: float, s: float, u2: float) -> float:
    """Threshold on ``|m - m0|`` below which Bayes beats the MLE predictor.

    ``sqrt(1 / (theta (2 + theta s)) + 2 u^2)``; its large-``s`` limit
    ``u sqrt(2)`` is a sufficient bound for every record length.
    """
    if theta <= 0 or s <= 0 or u2 <= 0:
        raise InvalidParameterError("theta, s and u2 must all be > 0")
    return math.sqrt(1.0 / (theta * (2.0 + theta * s)) + 2.0 * u2)


def mle_theta(stats: OuSufficientStats):
    """MLE of the rate: ``(S - X_S^2 + X_0^2) / 2 / int X^2``.

    May be negative for atypical records; returned raw.
    """
    if np.any(np.asarray(stats.int_x2) <= 0):
        raise DegeneratePathError("int_x2 must be > 0")
    return 0.5 * (stats.s - stats.x_end ** 2 + stats.x0 ** 2) / stats.int_x2


def bayes_theta(stats: OuSufficientStats, prior: GaussianPrior):
    """Posterior mean of the rate under a Gaussian prior: ``beta / alpha``."""
    alpha = stats.int_x2 + 1.0 / prior.variance
    beta = 0.5 * (stats.s - stats.x_end ** 2 + stats.x0 ** 2) + prior.mean / prior.variance
    return beta / alpha


def bayes_predict_theta_unknown(stats: OuSufficientStats, prior: GaussianPrior, h: float):
    """Bayes predictor ``exp(-(2 beta - h) h / (2 alpha)) X_S``.

    This is ``E(e^{-T h} | record) X_S`` for the Gaussian posterior
    ``T ~ N(beta/alpha, 1/alpha)``, i.e. the exponential moment rather
    than the exponential of the posterior mean.
    """
    if h < 0:
        raise InvalidParameterError(f"h must be >= 0, got {h}")
    alpha = stats.int_x2 + 1.0 / prior.variance
    beta = 0.5 * (stats.s - stats.x_end ** 2 + stats.x0 ** 2) + prior.mean / prior.variance
    return np.exp(-(2.0 * beta - h) * h / (2.0 * alpha)) * stats.x_end


def map_predict_theta_unknown(stats: OuSufficientStats, prior: GaussianPrior, h: float):
    """Plug-in predictor ``exp(-theta_hat h) X_S`` (posterior mode = mean)."""
    if h < 0:
        raise InvalidParameterError(f"h must be >= 0, got {h}")
    return np.exp(-bayes_theta(stats, prior) * h) * stats.x_end


def mle_predict_theta_unknown(stats: OuSufficientStats, h: float):
    """Plug-in predictor ``exp(-theta_mle h) X_S``."""
    if h < 0:
        raise InvalidParameterError(f"h must be >= 0, got {h}")
    return np.exp(-mle_theta(stats) * h) * stats.x_end


def _mills_ratio(x):
    """``phi(x) / (1 - Phi(x))``, stable for deep truncation.

    For moderate arguments the ratio is evaluated directly through
    ``erfc``; past ``_MILLS_SWITCH`` both numerator and denominator
    underflow together and the scaled complementary error function keeps
    the quotient finite: ``sqrt(2/pi) / erfcx(x / sqrt 2)``.
    """
    x = np.asarray(x, dtype=np.float64)
    scalar = x.ndim == 0
    xv = np.atleast_1d(x)
    out = np.empty_like(xv)
    small = xv <= _MILLS_SWITCH
    xs = xv[small]
    out[small] = np.exp(-0.5 * xs * xs) * _SQRT_2_OVER_PI / _spec.erfc(xs / _SQRT2)
    xl = xv[~small]
    out[~small] = _SQRT_2_OVER_PI / _spec.erfcx(xl / _SQRT2)
    return float(out[0]) if scalar else out


def bayes_theta_translated_exp(stats: OuSufficientStats, prior: TranslatedExpPrior):
    """Posterior mean of the rate under a translated exponential prior.

    The posterior is a normal ``N(-a/(2b), 1/b)`` with
    ``a = X_S^2 - X_0^2 - S + 2 eta`` and ``b = int X^2``, truncated to
    ``(theta0, inf)``; its mean is ``mu + sigma * mills((theta0 - mu)/sigma)``.
    """
    if np.any(np.asarray(stats.int_x2) <= 0):
        raise DegeneratePathError("int_x2 must be > 0")
    a = stats.x_end ** 2 - stats.x0 ** 2 - stats.s + 2.0 * prior.eta
    b = stats.int_x2
    mu = -a / (2.0 * b)
    sigma = 1.0 / np.sqrt(b)
    alpha0 = (prior.theta0 - mu) / sigma
    return mu + sigma * _mills_ratio(alpha0)
