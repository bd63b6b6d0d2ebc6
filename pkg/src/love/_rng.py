"""SplitMix64: the package's only source of randomness.

Chosen because the algorithm is tiny, fully specified by two multiply-xor
constants, and trivially portable, so seeded corpora can be reproduced
outside this codebase. Algorithm identity and frozen output vectors live in
tests/data/README.md.
"""

from __future__ import annotations

_MASK = 0xFFFFFFFFFFFFFFFF
_GOLDEN_GAMMA = 0x9E3779B97F4A7C15


class SplitMix64:
    """64-bit generator; one add, two xor-shift-multiplies per output."""

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & _MASK

    def next_u64(self) -> int:
        self._state = (self._state + _GOLDEN_GAMMA) & _MASK
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def unit(self) -> float:
        """Uniform float in [0, 1) from the top 53 bits."""
        return (self.next_u64() >> 11) * (2.0**-53)

    def uniform(self, low: float, high: float) -> float:
        return low + self.unit() * (high - low)

    def boolean(self) -> bool:
        """Top bit of the next output."""
        return bool(self.next_u64() >> 63)

    def index_below(self, n: int) -> int:
        """Uniform integer in [0, n) via floor(unit() * n)."""
        if n <= 0:
            raise ValueError("n must be positive")
        return min(int(self.unit() * n), n - 1)


def substream_seed(seed: int, index: int) -> int:
    """Seed for independent substream ``index``: the (index+1)-th output of
    SplitMix64(seed)."""
    rng = SplitMix64(seed)
    for _ in range(index):
        rng.next_u64()
    return rng.next_u64()
