"""Seeded random streams.

The bit generator is numpy's PCG64 (a published permuted-congruential
generator with a fixed, documented output function), so a seed gives the same
uniform stream on every platform. Normal deviates are produced from those
uniforms with the Box-Muller transform rather than numpy's ziggurat, which
keeps the normal stream specifiable independently of numpy internals.
"""
import numpy as np
from numerics.errors import InvalidDimensionError


class RngState:

    def __init__(self, seed: int):
        if seed < 0 or seed >= 2 ** 64:
            raise InvalidDimensionError(f'seed must be a 64-bit unsigned integer, got {seed}')
        self.seed = int(seed)
        self._bits = np.random.PCG64(self.seed)
        self._gen = np.random.Generator(self._bits)

    def uniform(self, n: int) -> np.ndarray:
        """n doubles in [0, 1)."""
        return self._gen.random(n)

    def sample_without_replacement(self, population: int, k: int) -> np.ndarray:
        # rank of k smallest keys of an i.i.d. uniform draw; sorted for stable layouts
        keys = self.uniform(population)
        return np.sort(np.argsort(keys, kind='stable')[:k])

    def signs(self, n: int) -> np.ndarray:
        return np.where(self.uniform(n) < 0.5, -1.0, 1.0)

    def state(self) -> dict:
        return self._bits.state

    def __repr__(self) -> str:
        return f'RngState(seed={self.seed})'


def gaussian_vector(state: RngState, n: int) -> np.ndarray:
    if n < 1:
        raise InvalidDimensionError(f'need at least one sample, got n={n}')
    pairs = (n + 1) // 2
    u = state.uniform(2 * pairs)
    # 1 - u lies in (0, 1], keeping the log finite
    radius = np.sqrt(-2.0 * np.log(1.0 - u[0::2]))
    angle = 2.0 * np.pi * u[1::2]
    out = np.empty(2 * pairs)
    out[0::2] = radius * np.cos(angle)
    out[1::2] = radius * np.sin(angle)
    return out[:n]


def gaussian_matrix(state: RngState, rows: int, cols: int) -> np.ndarray:
    return gaussian_vector(state, rows * cols).reshape(rows, cols)
