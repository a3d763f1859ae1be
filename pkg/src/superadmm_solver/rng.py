"""Portable, splittable random streams for the problem generators.

Generator: SplitMix64 (Steele, Lea, Flood mixing constants), used in
counter mode so draws are independent of batching:

    output(i) = mix64(stream_seed + (i+1) * 0x9E3779B97F4A7C15)

Stream seeds are derived from the user seed and a per-matrix stream id:

    stream_seed = mix64(seed + (sid+1) * 0xD1B54A32D192ED03)

Uniform doubles take the top 53 bits: (raw >> 11) * 2**-53 in [0, 1).
Gaussian draws are inverse-CDF: ndtri(((raw >> 12) + 0.5) * 2**-52)
with ndtri the Cephes inverse normal CDF as shipped by scipy.special.
Sparse Gaussian matrices draw their Bernoulli keep-mask from one stream
and values for the surviving entries from another, both in column-major
entry order, so patterns and values are independently reproducible.
"""

from __future__ import annotations

import numpy as np
from scipy.special import ndtri

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_STREAM_GAMMA = np.uint64(0xD1B54A32D192ED03)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)


def _mix64(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


class RandomStream:
    """One counter-mode SplitMix64 stream."""

    def __init__(self, seed: int, stream_id: int = 0):
        base = np.uint64(seed & 0xFFFFFFFFFFFFFFFF)
        sid = np.uint64((stream_id + 1) & 0xFFFFFFFFFFFFFFFF)
        with np.errstate(over="ignore"):
            self._seed = _mix64(np.array([base + sid * _STREAM_GAMMA]))[0]
        self._count = 0

    def raw(self, count: int) -> np.ndarray:
        idx = np.arange(self._count + 1, self._count + count + 1, dtype=np.uint64)
        self._count += count
        with np.errstate(over="ignore"):
            return _mix64(self._seed + idx * _GAMMA)

    def uniform(self, count: int, low: float = 0.0, high: float = 1.0) -> np.ndarray:
        u = (self.raw(count) >> np.uint64(11)).astype(np.float64) * 2.0 ** -53
        return low + (high - low) * u

    def normal(self, count: int, mean: float = 0.0, var: float = 1.0) -> np.ndarray:
        # Open-interval uniforms keep ndtri finite at both ends.
        u = ((self.raw(count) >> np.uint64(12)).astype(np.float64) + 0.5) * 2.0 ** -52
        return mean + np.sqrt(var) * ndtri(u)

    def bernoulli(self, count: int, p: float) -> np.ndarray:
        return self.uniform(count) < p
