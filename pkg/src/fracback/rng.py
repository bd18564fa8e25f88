"""Deterministic random numbers for reproducible noise experiments.

The generator is SplitMix64 (Steele, Lea, Flood 2014): a 64-bit counter
advanced by the golden-gamma constant, with the output mixed by two
xor-shift-multiply rounds.  Standard normal deviates come from the basic
Box-Muller transform applied to consecutive pairs of uniforms.  Both are
implemented here, in integer arithmetic, so a seed produces the exact
same noise vector on every platform.
"""

import math

import numpy as np

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


class SplitMix64:
    """SplitMix64 stream seeded by a 64-bit integer."""

    def __init__(self, seed: int):
        self._state = int(seed) & _MASK

    def next_uint64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def uniform(self) -> float:
        """Uniform deviate in (0, 1]: (top 53 bits + 1) * 2**-53."""
        return ((self.next_uint64() >> 11) + 1) * 2.0**-53

    def standard_normal(self, n: int) -> np.ndarray:
        """n i.i.d. standard normals via Box-Muller on uniform pairs."""
        if n < 0:
            raise ValueError(f"sample count must be nonnegative, got {n}")
        out = np.empty(n)
        i = 0
        while i < n:
            u1 = self.uniform()
            u2 = self.uniform()
            radius = math.sqrt(-2.0 * math.log(u1))
            out[i] = radius * math.cos(2.0 * math.pi * u2)
            i += 1
            if i < n:
                out[i] = radius * math.sin(2.0 * math.pi * u2)
                i += 1
        return out
