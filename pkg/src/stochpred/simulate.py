"""Exact simulation of homogeneous Poisson and stationary OU paths.

Poisson paths are stored as event times so a single long trajectory can be
queried at any window end.  OU paths are simulated on the sampling grid
with the exact Gaussian transition (AR(1) with coefficient ``exp(-theta *
step)`` and stationary start), so there is no discretization error at grid
points; time integrals are approximated by the trapezoid rule on that
grid.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from ._rng import RngStream, _to_uniform, _words
from .errors import InvalidParameterError, OutOfRangeError


@dataclass(frozen=True)
class PoissonPath:
    """One homogeneous Poisson trajectory on ``[0, horizon]``.

    ``event_times`` is strictly increasing with every entry <= horizon.
    """

    intensity_true: float
    horizon: float
    event_times: np.ndarray


@dataclass(frozen=True)
class OuPath:
    """Equispaced samples ``X_0, X_step, ..., X_{n*step}`` of one OU path."""

    m_true: float
    theta_true: float
    step: float
    values: np.ndarray


def simulate_poisson(theta: float, horizon: float, rng: RngStream) -> PoissonPath:
    """Draw one Poisson path: cumulative Exponential(theta) gaps up to horizon.

    A zero-length window yields an empty path; negative parameters are
    rejected.
    """
    if theta <= 0:
        raise InvalidParameterError(f"theta must be > 0, got {theta}")
    if horizon < 0:
        raise InvalidParameterError(f"horizon must be >= 0, got {horizon}")
    seeds = np.array([rng.seed()], dtype=np.uint64)
    events: list[float] = []
    t = 0.0
    j = 0
    block = 256
    while True:
        c = np.arange(j, j + block, dtype=np.uint64)
        gaps = -np.log(_to_uniform(_words(seeds, c)))[0] / theta
        done = False
        for g in gaps:
            t += g
            if t > horizon:
                done = True
                break
            events.append(t)
        if done:
            break
        j += block
    return PoissonPath(intensity_true=theta, horizon=horizon,
                       event_times=np.asarray(events, dtype=np.float64))


def count_at(path: PoissonPath, t: float) -> int:
    """Number of events with time <= ``t`` (boundary included)."""
    if t < 0 or t > path.horizon:
        raise OutOfRangeError(f"t={t} outside [0, {path.horizon}]")
    return int(np.searchsorted(path.event_times, t, side="right"))


def simulate_ou(m: float, theta: float, step: float, n: int, rng: RngStream) -> OuPath:
    """Draw one stationary OU path at ``n + 1`` grid points.

    ``X_0 ~ N(m, 1/(2 theta))`` followed by the exact AR(1) recursion with
    coefficient ``exp(-theta * step)`` and innovation variance
    ``innovation_variance(theta, step)``.
    """
    if theta <= 0:
        raise InvalidParameterError(f"theta must be > 0, got {theta}")
    if step <= 0:
        raise InvalidParameterError(f"step must be > 0, got {step}")
    if n < 1:
        raise InvalidParameterError(f"n must be >= 1, got {n}")
    seeds = np.array([rng.seed()], dtype=np.uint64)
    values = _kernels.ou_paths_for_seeds(seeds, m, theta, step, n)[0]
    return OuPath(m_true=m, theta_true=theta, step=step, values=values)


def innovation_variance(theta: float, step: float) -> float:
    """Variance of one AR(1) innovation: ``(1 - exp(-2 theta step)) / (2 theta)``."""
    return (1.0 - np.exp(-2.0 * theta * step)) / (2.0 * theta)


def path_integrals(path: OuPath) -> tuple[float, float]:
    """Trapezoid-rule ``(int X dt, int X^2 dt)`` over the path's full grid."""
    v = np.asarray(path.values, dtype=np.float64)
    if v.size < 2:
        raise InvalidParameterError("path needs at least 2 values")
    dx = path.step
    int_x = dx * (v.sum() - 0.5 * (v[0] + v[-1]))
    v2 = v * v
    int_x2 = dx * (v2.sum() - 0.5 * (v2[0] + v2[-1]))
    return float(int_x), float(int_x2)
