"""Hot simulation kernels, in numba and pure-numpy variants.

Two kernels dominate runtime: generating Poisson counting paths and
generating Ornstein-Uhlenbeck sample paths, both across many replicates.
Each exists as an ``@njit`` loop and as a vectorized numpy fallback; the
variant is picked per call from :mod:`stochpred._backend`.

Because every variate is a pure function of ``(stream seed, word index)``
(see :mod:`stochpred._rng`), both variants consume identical random words
and the per-replicate outputs agree to the last bit up to possible 1-ulp
differences in the platform's ``log``/``cos``/``exp``.  Replicates are
processed in fixed-size blocks; block results land in preallocated rows,
so output never depends on worker count or scheduling order.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import _backend
from ._rng import (
    TWO_PI,
    U_1,
    U_11,
    U_27,
    U_30,
    U_31,
    U_GOLDEN,
    U_MUL1,
    U_MUL2,
    _to_uniform,
    _words,
    stream_seeds,
)

# Replicates per work item.  Fixed: results must not depend on it, but the
# block list must be reproducible for the scheduling-invariance guarantee.
_BLOCK = 1024

# Columns such that P(Poisson(mu) > mu + 12*sqrt(mu) + 50) < 1e-12; the
# numpy fallback pre-draws this many gaps per path and extends the rare
# short rows one by one.
def _poisson_margin(mu: float) -> int:
    return int(math.ceil(mu + 12.0 * math.sqrt(mu) + 50.0))


# ---------------------------------------------------------------------------
# numpy variants
# ---------------------------------------------------------------------------

def _poisson_counts_np(seeds: np.ndarray, theta: float, times: np.ndarray,
                       out: np.ndarray) -> None:
    horizon = float(times[-1])
    m = _poisson_margin(theta * horizon)
    # sub-block the replicate rows so the gap matrix stays modest
    step = max(1, 4_000_000 // m)
    for a in range(0, seeds.shape[0], step):
        sub = seeds[a:a + step]
        gaps = -np.log(_to_uniform(_words(sub, np.arange(m, dtype=np.uint64)))) / theta
        ev = np.cumsum(gaps, axis=1)
        for i, t in enumerate(times):
            out[a:a + step, i] = (ev <= t).sum(axis=1)
        # rows whose m-th event is still inside the horizon (tail probability
        # < 1e-12 per path): redo them sequentially, same word stream
        short = np.flatnonzero(ev[:, -1] <= horizon)
        for r in short:
            _poisson_counts_row(int(sub[r]), theta, times, out[a + r])


def _poisson_counts_row(seed: int, theta: float, times: np.ndarray,
                        row: np.ndarray) -> None:
    """Sequential single-path fallback, bit-compatible with the kernels."""
    seeds = np.array([seed], dtype=np.uint64)
    t = 0.0
    count = 0
    j = 0
    block = 256
    gaps = -np.log(_to_uniform(_words(seeds, np.arange(block, dtype=np.uint64))))[0] / theta
    k = 0
    for i, limit in enumerate(times):
        while True:
            if k == block:
                j += block
                c = np.arange(j, j + block, dtype=np.uint64)
                gaps = -np.log(_to_uniform(_words(seeds, c)))[0] / theta
                k = 0
            nxt = t + gaps[k]
            if nxt > limit:
                break
            t = nxt
            count += 1
            k += 1
        row[i] = count


def _ou_paths_np(seeds: np.ndarray, m: float, theta: float, step: float,
                 out: np.ndarray) -> None:
    n_steps = out.shape[1] - 1
    rho = math.exp(-theta * step)
    sd0 = math.sqrt(1.0 / (2.0 * theta))
    sd = math.sqrt((1.0 - rho * rho) / (2.0 * theta))
    # draw the normals in column chunks so long paths stay memory-bounded
    chunk = max(64, 2_000_000 // max(1, seeds.shape[0]))
    for c0 in range(0, n_steps + 1, chunk):
        c1 = min(c0 + chunk, n_steps + 1)
        j = np.arange(c0, c1, dtype=np.uint64)
        u1 = _to_uniform(_words(seeds, j * np.uint64(2)))
        u2 = _to_uniform(_words(seeds, j * np.uint64(2) + U_1))
        z = np.sqrt(-2.0 * np.log(u1)) * np.cos(TWO_PI * u2)
        for t in range(c0, c1):
            if t == 0:
                out[:, 0] = m + sd0 * z[:, 0]
            else:
                out[:, t] = m + rho * (out[:, t - 1] - m) + sd * z[:, t - c0]


# ---------------------------------------------------------------------------
# numba variants
# ---------------------------------------------------------------------------

if _backend.HAS_NUMBA:
    from numba import njit

    @njit(cache=True, inline="always")
    def _mix64_nb(z):
        z = (z ^ (z >> U_30)) * U_MUL1
        z = (z ^ (z >> U_27)) * U_MUL2
        return z ^ (z >> U_31)

    @njit(cache=True, inline="always")
    def _uniform_nb(seed, i):
        z = _mix64_nb(seed + (np.uint64(i) + U_1) * U_GOLDEN)
        return (np.float64(z >> U_11) + 0.5) * 2.0 ** -53

    @njit(cache=True, inline="always")
    def _normal_nb(seed, j):
        u1 = _uniform_nb(seed, 2 * j)
        u2 = _uniform_nb(seed, 2 * j + 1)
        return math.sqrt(-2.0 * math.log(u1)) * math.cos(TWO_PI * u2)

    @njit(cache=True, nogil=True)
    def _poisson_counts_nb(seeds, theta, times, out):
        for k in range(seeds.shape[0]):
            s = seeds[k]
            count = 0
            j = 0
            t = -math.log(_uniform_nb(s, 0)) / theta
            for i in range(times.shape[0]):
                limit = times[i]
                while t <= limit:
                    count += 1
                    j += 1
                    t += -math.log(_uniform_nb(s, j)) / theta
                out[k, i] = count

    @njit(cache=True, nogil=True)
    def _ou_paths_nb(seeds, m, theta, step, out):
        n_steps = out.shape[1] - 1
        rho = math.exp(-theta * step)
        sd0 = math.sqrt(1.0 / (2.0 * theta))
        sd = math.sqrt((1.0 - rho * rho) / (2.0 * theta))
        for k in range(seeds.shape[0]):
            s = seeds[k]
            x = m + sd0 * _normal_nb(s, 0)
            out[k, 0] = x
            for t in range(1, n_steps + 1):
                x = m + rho * (x - m) + sd * _normal_nb(s, t)
                out[k, t] = x


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------

def _run_blocks(work, n: int, workers: int) -> None:
    spans = [(a, min(a + _BLOCK, n)) for a in range(0, n, _BLOCK)]
    if workers <= 1 or len(spans) == 1:
        for span in spans:
            work(span)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(work, spans))


def poisson_counts_for_seeds(seeds: np.ndarray, theta: float, times: np.ndarray,
                             workers: int = 1) -> np.ndarray:
    """Counting-path values ``N_t`` at each of ``times`` (ascending), per stream."""
    times = np.ascontiguousarray(times, dtype=np.float64)
    if times.size == 0:
        return np.zeros((seeds.shape[0], 0), dtype=np.int64)
    if np.any(np.diff(times) < 0):
        raise ValueError("times must be ascending")
    out = np.empty((seeds.shape[0], times.size), dtype=np.int64)
    use_numba = _backend.get_backend() == "numba"

    def work(span):
        a, b = span
        if use_numba:
            _poisson_counts_nb(seeds[a:b], theta, times, out[a:b])
        else:
            _poisson_counts_np(seeds[a:b], theta, times, out[a:b])

    _run_blocks(work, seeds.shape[0], workers)
    return out


def poisson_counts(master_seed: int, n_replicates: int, theta: float,
                   times: np.ndarray, workers: int = 1) -> np.ndarray:
    return poisson_counts_for_seeds(stream_seeds(master_seed, n_replicates),
                                    theta, times, workers)


def ou_paths_for_seeds(seeds: np.ndarray, m: float, theta: float, step: float,
                       n_steps: int, workers: int = 1) -> np.ndarray:
    """Stationary OU values ``X_0 .. X_{n_steps * step}`` per stream."""
    out = np.empty((seeds.shape[0], n_steps + 1), dtype=np.float64)
    use_numba = _backend.get_backend() == "numba"

    def work(span):
        a, b = span
        if use_numba:
            _ou_paths_nb(seeds[a:b], m, theta, step, out[a:b])
        else:
            _ou_paths_np(seeds[a:b], m, theta, step, out[a:b])

    _run_blocks(work, seeds.shape[0], workers)
    return out


def ou_paths(master_seed: int, n_replicates: int, m: float, theta: float,
             step: float, n_steps: int, workers: int = 1) -> np.ndarray:
    return ou_paths_for_seeds(stream_seeds(master_seed, n_replicates),
                              m, theta, step, n_steps, workers)
