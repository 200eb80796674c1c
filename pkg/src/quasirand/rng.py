"""Deterministic PRNG for seeded corpora and Monte Carlo estimators.

All randomness in the library flows through SplitMix64 so that seeded runs
reproduce byte-for-byte across platforms and library versions (numpy's
distribution methods do not promise cross-version stream stability).
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def _mix(z: int) -> int:
    z = (z ^ (z >> 30)) * _MIX1 & _MASK64
    z = (z ^ (z >> 27)) * _MIX2 & _MASK64
    return z ^ (z >> 31)


class SplitMix64:
    """SplitMix64 generator.

    The state advances as ``state_t = seed + t * 0x9E3779B97F4A7C15 (mod 2^64)``
    and each output is the standard SplitMix64 finalizer applied to the state:
    ``z ^= z >> 30; z *= 0xBF58476D1CE4E5B9; z ^= z >> 27;
    z *= 0x94D049BB133111EB; z ^= z >> 31``.
    Scalar and vectorized draws consume the same stream.
    """

    def __init__(self, seed: int) -> None:
        self._seed = seed & _MASK64
        self._t = 0

    def next_u64(self) -> int:
        self._t += 1
        return _mix((self._seed + self._t * _GAMMA) & _MASK64)

    def u64_array(self, count: int) -> np.ndarray:
        ts = np.arange(self._t + 1, self._t + count + 1, dtype=np.uint64)
        self._t += count
        z = (np.uint64(self._seed) + ts * np.uint64(_GAMMA))
        z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
        return z ^ (z >> np.uint64(31))

    def uniform(self) -> float:
        # 53-bit mantissa -> uniform in [0, 1)
        return (self.next_u64() >> 11) * 2.0**-53

    def uniform_array(self, count: int) -> np.ndarray:
        return (self.u64_array(count) >> np.uint64(11)).astype(np.float64) * 2.0**-53

    def below(self, n: int) -> int:
        """Uniform integer in [0, n) via rejection (no modulo bias)."""
        if n <= 0:
            raise ValueError("below() needs n >= 1")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            r = self.next_u64()
            if r < limit:
                return r % n

    def below_array(self, n: int, count: int) -> np.ndarray:
        limit = np.uint64((1 << 64) - ((1 << 64) % n))
        out = np.empty(count, dtype=np.int64)
        filled = 0
        while filled < count:
            draws = self.u64_array(max(count - filled, 16))
            good = draws[draws < limit]
            take = min(len(good), count - filled)
            out[filled:filled + take] = (good[:take] % np.uint64(n)).astype(np.int64)
            filled += take
        return out

    def sample(self, population: int, size: int) -> list[int]:
        """Partial Fisher-Yates draw of `size` distinct ints from range(population)."""
        if size > population:
            raise ValueError("sample size exceeds population")
        pool = list(range(population))
        for i in range(size):
            j = i + self.below(population - i)
            pool[i], pool[j] = pool[j], pool[i]
        return sorted(pool[:size])


def derive_seed(master: int, label: str) -> int:
    """Stable sub-seed for a named suite or corpus under one master seed."""
    z = master & _MASK64
    for byte in label.encode("utf-8"):
        z = _mix((z ^ byte) + _GAMMA & _MASK64)
    return z
