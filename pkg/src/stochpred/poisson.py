"""Predictors of ``N_{S+h}`` from ``N_S`` and their dominance regions.

All predictors share the structure ``value = n_s + theta_estimate * h``;
they differ only in the embedded intensity estimate.  The unbiased
efficient predictor uses ``n_s / s``; under a Gamma(a, b) prior the
posterior-mean estimate is ``(a + n_s) / (b + s)`` and the posterior-mode
(MAP) estimate is ``(n_s + a - 1) / (b + s)``, so the MAP predictor with
shape ``a`` coincides exactly with the Bayes predictor with shape
``a - 1``.

``n_s`` may be a scalar or an ndarray; everything is elementwise, which is
how the Monte Carlo harness evaluates whole replicate batches through the
same code path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import stats as _sps

from .errors import InvalidParameterError, TruncationError
from .priors import GammaPrior

#: tail mass above the truncation point must stay below this
TAIL_TOL = 1e-12


@dataclass(frozen=True)
class Prediction:
    """A point prediction together with the intensity estimate it embeds."""

    label: str
    value: float
    theta_estimate: float


def _check_inputs(n_s, s: float, h: float) -> None:
    if s <= 0:
        raise InvalidParameterError(f"s must be > 0, got {s}")
    if h <= 0:
        raise InvalidParameterError(f"h must be > 0, got {h}")
    if np.any(np.asarray(n_s) < 0):
        raise InvalidParameterError("n_s must be >= 0")


def up_predict(n_s, s: float, h: float) -> Prediction:
    """Unbiased efficient predictor ``((s+h)/s) n_s``."""
    _check_inputs(n_s, s, h)
    theta_est = n_s / s
    return Prediction("UP", n_s + theta_est * h, theta_est)


def bayes_predict(n_s, s: float, h: float, prior: GammaPrior) -> Prediction:
    """Posterior-mean predictor ``n_s + h (a + n_s) / (b + s)``."""
    _check_inputs(n_s, s, h)
    theta_est = (prior.a + n_s) / (prior.b + s)
    return Prediction("BP", n_s + theta_est * h, theta_est)


def map_predict(n_s, s: float, h: float, prior: GammaPrior) -> Prediction:
    """Posterior-mode predictor ``n_s + h (n_s + a - 1) / (b + s)``.

    Requires ``a >= 1``; for smaller shapes the posterior mode sits at the
    boundary and is rejected rather than clamped.
    """
    _check_inputs(n_s, s, h)
    if prior.a < 1:
        raise InvalidParameterError(f"MAP needs prior shape a >= 1, got a={prior.a}")
    shift = prior.a - 1.0
    theta_est = (shift + n_s) / (prior.b + s)
    return Prediction("MAP", n_s + theta_est * h, theta_est)


def dominance_interval_at_s(prior: GammaPrior, s: float) -> tuple[float, float]:
    """Open interval of true intensities where Bayes beats UP at this ``s``.

    Solves ``(theta - theta0)^2 <= (1/s + 2/b) theta`` for ``theta``, with
    ``theta0 = a / b``: the roots are ``center +- sqrt(center^2 - theta0^2)``
    around ``center = theta0 + 1/(2s) + 1/b``.
    """
    if s <= 0:
        raise InvalidParameterError(f"s must be > 0, got {s}")
    theta0 = prior.mean
    center = theta0 + 0.5 / s + 1.0 / prior.b
    root = math.sqrt(center * center - theta0 * theta0)
    return center - root, center + root


def dominance_interval_all_s(prior: GammaPrior) -> tuple[float, float]:
    """Sufficient dominance interval holding for every record length.

    ``((a + 1) - sqrt(2a + 1)) / b`` to ``((a + 1) + sqrt(2a + 1)) / b``.
    """
    root = math.sqrt(2.0 * prior.a + 1.0)
    return (prior.a + 1.0 - root) / prior.b, (prior.a + 1.0 + root) / prior.b


class PoissonRisk(NamedTuple):
    estimation_risk: float
    prediction_risk: float
    tail_mass: float


_PREDICTORS = {"up": up_predict, "bayes": bayes_predict, "map": map_predict}


def exact_risk_poisson(predictor: str, theta: float, s: float, h: float,
                       prior: GammaPrior | None = None,
                       truncation: int | None = None) -> PoissonRisk:
    """Brute-force exact risks of a predictor, by summing over ``N_s``.

    ``estimation_risk`` is ``sum_k P(N_s = k) (p(k) - (k + theta h))^2``
    and the prediction risk adds the conditional variance ``theta h`` of
    the future increment.  The sum runs over ``k <= truncation`` (default
    ``theta s + 12 sqrt(theta s) + 50``); if the remaining tail mass is not
    below ``TAIL_TOL`` a :class:`TruncationError` is raised.  The achieved
    tail mass is returned alongside the risks.
    """
    if theta <= 0:
        raise InvalidParameterError(f"theta must be > 0, got {theta}")
    if s <= 0:
        raise InvalidParameterError(f"s must be > 0, got {s}")
    if h < 0:
        raise InvalidParameterError(f"h must be >= 0, got {h}")
    name = predictor.lower()
    if name not in _PREDICTORS:
        raise InvalidParameterError(f"unknown predictor {predictor!r}")
    mu = theta * s
    kmax = truncation if truncation is not None else int(math.ceil(mu + 12.0 * math.sqrt(mu) + 50.0))
    tail = float(_sps.poisson.sf(kmax, mu))
    if tail > TAIL_TOL:
        raise TruncationError(
            f"truncation {kmax} leaves tail mass {tail:.3e} > {TAIL_TOL:.0e}", tail)
    if h == 0:
        # every predictor collapses to n_s itself, so both risks vanish
        return PoissonRisk(0.0, 0.0, tail)
    k = np.arange(kmax + 1, dtype=np.float64)
    pmf = _sps.poisson.pmf(k, mu)
    if name == "up":
        pred = up_predict(k, s, h).value
    else:
        pred = _PREDICTORS[name](k, s, h, prior).value
    est = float(np.sum(pmf * (pred - (k + theta * h)) ** 2))
    return PoissonRisk(est, est + theta * h, tail)
