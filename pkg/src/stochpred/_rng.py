"""Counter-based random streams shared by the numpy and numba kernels.

Each replicate owns one stream, fully determined by ``(master_seed,
replicate_index)``.  Raw 64-bit word ``i`` of a stream with seed ``s`` is
``splitmix64_mix(s + (i + 1) * GOLDEN)``, so every variate is a pure
function of (seed, index): blocks can be generated in any order, on any
number of workers, vectorized or in a JIT loop, with identical values.

Variate layout (fixed for fixture stability):

* uniform ``i``    consumes word ``i`` and lands in the open interval (0, 1);
* exponential ``i`` is ``-log(uniform_i) / rate``;
* normal ``j``     consumes words ``2j`` and ``2j + 1`` via the Box-Muller
  cosine branch, ``sqrt(-2 log u1) * cos(2 pi u2)``.  The sine mate is
  discarded so the word position of draw ``j`` never depends on earlier
  draws.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

MASK64 = 0xFFFFFFFFFFFFFFFF
GOLDEN = 0x9E3779B97F4A7C15
_MUL1 = 0xBF58476D1CE4E5B9
_MUL2 = 0x94D049BB133111EB

# numpy-scalar versions of the constants, so array expressions stay uint64
U_GOLDEN = np.uint64(GOLDEN)
U_MUL1 = np.uint64(_MUL1)
U_MUL2 = np.uint64(_MUL2)
U_1 = np.uint64(1)
U_11 = np.uint64(11)
U_27 = np.uint64(27)
U_30 = np.uint64(30)
U_31 = np.uint64(31)

TWO_PI = 2.0 * math.pi
_INV_2_53 = 2.0 ** -53


def mix64(z: int) -> int:
    """splitmix64 avalanche of a single 64-bit integer (pure python)."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * _MUL1) & MASK64
    z = ((z ^ (z >> 27)) * _MUL2) & MASK64
    return z ^ (z >> 31)


def stream_seed(master_seed: int, replicate_index: int) -> int:
    """Derive the stream root for one replicate.

    This is exactly output ``replicate_index`` of the splitmix64 sequence
    started at ``master_seed``, which is the standard way of splitting one
    seed into decorrelated streams.
    """
    if replicate_index < 0:
        raise ValueError("replicate_index must be >= 0")
    return mix64(master_seed + GOLDEN * (replicate_index + 1))


def stream_seeds(master_seed: int, count: int, start: int = 0) -> np.ndarray:
    """Vector of stream roots for replicates ``start .. start+count-1``."""
    idx = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    z = np.uint64(master_seed & MASK64) + idx * U_GOLDEN
    return _mix64_array(z)


def _mix64_array(z: np.ndarray) -> np.ndarray:
    """splitmix64 avalanche, elementwise over a fresh uint64 array."""
    z ^= z >> U_30
    z *= U_MUL1
    z ^= z >> U_27
    z *= U_MUL2
    z ^= z >> U_31
    return z


def _words(seeds: np.ndarray, counters: np.ndarray) -> np.ndarray:
    """Raw words ``counters`` for every stream in ``seeds`` (outer shape)."""
    return _mix64_array(seeds[:, None] + (counters[None, :] + U_1) * U_GOLDEN)


def _to_uniform(words: np.ndarray) -> np.ndarray:
    # (w >> 11) has at most 53 significant bits, so the float conversion is
    # exact; the +0.5 keeps the result strictly inside (0, 1).
    return ((words >> U_11).astype(np.float64) + 0.5) * _INV_2_53


def uniforms(seeds: np.ndarray, start: int, count: int) -> np.ndarray:
    """Uniform(0,1) draws ``start .. start+count-1`` for each stream."""
    c = np.arange(start, start + count, dtype=np.uint64)
    return _to_uniform(_words(seeds, c))


def normals(seeds: np.ndarray, start: int, count: int) -> np.ndarray:
    """Standard normal draws ``start .. start+count-1`` for each stream."""
    j = np.arange(start, start + count, dtype=np.uint64)
    u1 = _to_uniform(_words(seeds, j * np.uint64(2)))
    u2 = _to_uniform(_words(seeds, j * np.uint64(2) + U_1))
    return np.sqrt(-2.0 * np.log(u1)) * np.cos(TWO_PI * u2)


def exponentials(seeds: np.ndarray, start: int, count: int, rate: float) -> np.ndarray:
    """Exponential(rate) draws ``start .. start+count-1`` for each stream."""
    return -np.log(uniforms(seeds, start, count)) / rate


@dataclass(frozen=True)
class RngStream:
    """Handle for one replicate's stream.

    The stream for ``(master_seed, replicate_index)`` is fully determined
    by the pair; distinct indices give statistically independent streams.
    """

    master_seed: int
    replicate_index: int = 0

    def seed(self) -> int:
        return stream_seed(self.master_seed, self.replicate_index)

    def _seed_arr(self) -> np.ndarray:
        return np.array([self.seed()], dtype=np.uint64)

    def uniforms(self, count: int, start: int = 0) -> np.ndarray:
        return uniforms(self._seed_arr(), start, count)[0]

    def normals(self, count: int, start: int = 0) -> np.ndarray:
        return normals(self._seed_arr(), start, count)[0]

    def exponentials(self, rate: float, count: int, start: int = 0) -> np.ndarray:
        return exponentials(self._seed_arr(), start, count, rate)[0]
