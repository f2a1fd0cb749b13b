"""Deterministic 64-bit PRNG with per-trial substreams.

SplitMix64 (Steele, Lea, Flood 2014).  Every randomized harness in this
package derives its draws from this generator so that runs are reproducible
bit-for-bit across platforms; ``substream(seed, index)`` gives each trial an
independent stream keyed by (seed, trial index).
"""

from __future__ import annotations

import math

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _mix(z: int) -> int:
    z &= _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


class SplitMix64:
    """SplitMix64 stream starting from a 64-bit state."""

    def __init__(self, state: int):
        self._state = state & _MASK

    @classmethod
    def substream(cls, seed: int, index: int) -> "SplitMix64":
        """Independent stream for trial ``index`` of a run seeded with ``seed``."""
        return cls(_mix(seed + _GOLDEN * (index + 1)))

    def next_u64(self) -> int:
        self._state = (self._state + _GOLDEN) & _MASK
        return _mix(self._state)

    def uniform(self) -> float:
        """Uniform double in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * 2.0**-53

    def uniform_in(self, lo: float, hi: float) -> float:
        return lo + (hi - lo) * self.uniform()

    def int_below(self, n: int) -> int:
        """Uniform integer in [0, n) (n <= 2^32; modulo bias negligible here)."""
        return self.next_u64() % n

    def complex_on_disk(self, radius: float) -> complex:
        """Uniform modulus in [0, radius] times a uniform phase."""
        r = self.uniform() * radius
        phi = 2.0 * math.pi * self.uniform()
        return complex(r * math.cos(phi), r * math.sin(phi))
