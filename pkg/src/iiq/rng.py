"""Portable seeded generator for synthetic traces.

A 64-bit linear congruential generator (Knuth's MMIX constants)::

    state <- (6364136223846793005 * state + 1442695040888963407) mod 2**64

Uniform floats take the top 53 bits of the new state. Normals use one
Box-Muller draw per call (the sine partner is discarded). Everything is plain
integer arithmetic so other languages can reproduce the stream exactly.
"""

from __future__ import annotations

import math
from collections.abc import Sequence

_MULT = 6364136223846793005
_INC = 1442695040888963407
_MASK = (1 << 64) - 1


class Lcg64:
    def __init__(self, seed: int):
        self.state = seed & _MASK
        self.next_u64()

    def next_u64(self) -> int:
        self.state = (_MULT * self.state + _INC) & _MASK
        return self.state

    def random(self) -> float:
        """Uniform in [0, 1)."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def integer(self, lo: int, hi: int) -> int:
        """Uniform integer in the closed range [lo, hi]."""
        if hi < lo:
            raise ValueError("empty range")
        return lo + min(int(self.random() * (hi - lo + 1)), hi - lo)

    def uniform(self, lo: float, hi: float) -> float:
        return lo + (hi - lo) * self.random()

    def normal(self) -> float:
        u1 = self.random()
        u2 = self.random()
        return math.sqrt(-2.0 * math.log(1.0 - u1)) * math.cos(2.0 * math.pi * u2)

    def lognormal(self, mu: float, sigma: float) -> float:
        return math.exp(mu + sigma * self.normal())

    def categorical(self, probs: Sequence[float]) -> int:
        """Index drawn with the given probabilities (assumed to sum to 1)."""
        u = self.random()
        acc = 0.0
        for i, p in enumerate(probs):
            acc += p
            if u < acc:
                return i
        # rounding left a sliver above the last cumulative value
        return max(i for i, p in enumerate(probs) if p > 0)
