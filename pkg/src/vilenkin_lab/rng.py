"""Seedable generator for reproducible randomized inputs.

The generator is xorshift64*, defined entirely by its update formula so
the same 64-bit seed yields the same sample sequence in any language:

    state ^= state >> 12
    state ^= (state << 25) mod 2^64
    state ^= state >> 27
    output = (state * 2685821657736338717) mod 2^64

Doubles in [0, 1) take the top 53 bits: (output >> 11) * 2^-53.  A zero
seed is remapped to the constant 0x9E3779B97F4A7C15 because the all-zero
state is a fixed point of the update.
"""

from __future__ import annotations

import numpy as np

_MASK = (1 << 64) - 1
_MULT = 2685821657736338717
_ZERO_SEED = 0x9E3779B97F4A7C15


class XorShift64Star:
    def __init__(self, seed: int) -> None:
        state = int(seed) & _MASK
        self._state = state if state else _ZERO_SEED

    def next_u64(self) -> int:
        x = self._state
        x ^= x >> 12
        x = (x ^ (x << 25)) & _MASK
        x ^= x >> 27
        self._state = x
        return (x * _MULT) & _MASK

    def uniform(self) -> float:
        """Next double in [0, 1)."""
        return (self.next_u64() >> 11) * 2.0**-53

    def uniforms(self, count: int) -> np.ndarray:
        return np.array([self.uniform() for _ in range(count)], dtype=np.float64)

    def complex_uniforms(self, count: int) -> np.ndarray:
        """Complex samples with real and imaginary parts uniform on [-1, 1)."""
        out = np.empty(count, dtype=np.complex128)
        for i in range(count):
            re = 2.0 * self.uniform() - 1.0
            im = 2.0 * self.uniform() - 1.0
            out[i] = complex(re, im)
        return out
