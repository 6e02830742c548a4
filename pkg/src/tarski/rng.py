"""Seeded, portable pseudo-random generator for reproducible instances.

splitmix64: the state advances by the golden-ratio increment
0x9E3779B97F4A7C15 per draw; the output is the state mixed by two
multiply-xorshift rounds (multipliers 0xBF58476D1CE4E5B9 and
0x94D049BB133111EB, shifts 30/27/31). Bounded draws reduce next_u64()
modulo n. The sequence depends only on the seed, never on the platform.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


class SplitMix64:
    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        """Draw from {0, ..., n-1}."""
        if n <= 0:
            raise ValueError("below() needs a positive bound")
        return self.next_u64() % n
