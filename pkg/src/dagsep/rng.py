"""Deterministic sampling primitives with a frozen generator identity.

Every randomized operation in this package draws from splitmix64 run in
counter mode: output t of the stream seeded with s is

    mix64((s + (t + 1) * GOLDEN) mod 2**64)

The generator is specified in full right here, so seeds recorded in configs
and regression tests stay valid no matter how any library RNG evolves.
``u64_block``/``double_block`` evaluate the same sequence with vectorized
uint64 arithmetic; ``Stream`` is the scalar view.

``split_seed`` derives child seeds from a parent seed and an index path,
giving each graph, pair, and conditioning-set draw its own stream without
any sequential coupling between experiment trials.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15

_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB


def mix64(x: int) -> int:
    """splitmix64 finalizer, a bijective mixer on 64-bit words."""
    x &= MASK64
    x = ((x ^ (x >> 30)) * _M1) & MASK64
    x = ((x ^ (x >> 27)) * _M2) & MASK64
    return x ^ (x >> 31)


def split_seed(seed: int, *path: int) -> int:
    """Derive a child seed from ``seed`` and a path of non-negative indices.

    Distinct paths give (for all practical purposes) independent streams.
    The fold injects mix64((idx+1)*GOLDEN) at each level; the +1 keeps the
    all-zero fixed point of mix64 out of the picture.
    """
    s = seed & MASK64
    for idx in path:
        if idx < 0:
            raise ValueError("seed_path: indices must be non-negative")
        s = mix64(s ^ mix64(((idx + 1) * GOLDEN) & MASK64))
    return s


def u64_block(seed: int, count: int, offset: int = 0) -> np.ndarray:
    """Stream outputs offset..offset+count-1 as a uint64 array.

    Bit-identical to ``count`` successive ``Stream(seed).u64()`` calls when
    ``offset`` is 0; uint64 arithmetic wraps mod 2**64 by construction.
    """
    if count < 0:
        raise ValueError("count: must be non-negative")
    idx = np.arange(offset + 1, offset + count + 1, dtype=np.uint64)
    x = np.uint64(seed & MASK64) + idx * np.uint64(GOLDEN)
    x ^= x >> np.uint64(30)
    x *= np.uint64(_M1)
    x ^= x >> np.uint64(27)
    x *= np.uint64(_M2)
    x ^= x >> np.uint64(31)
    return x


def double_block(seed: int, count: int, offset: int = 0) -> np.ndarray:
    """Uniform doubles in [0, 1), 53 random bits each, as a float64 array."""
    return (u64_block(seed, count, offset) >> np.uint64(11)).astype(np.float64) * 2.0**-53


class Stream:
    """Scalar sampling interface over a single counter-mode stream."""

    __slots__ = ("_seed", "_t")

    def __init__(self, seed: int):
        self._seed = seed & MASK64
        self._t = 0

    def u64(self) -> int:
        self._t += 1
        return mix64((self._seed + self._t * GOLDEN) & MASK64)

    def random(self) -> float:
        """Uniform double in [0, 1)."""
        return (self.u64() >> 11) * 2.0**-53

    def below(self, n: int) -> int:
        """Uniform integer in [0, n), exactly unbiased via rejection."""
        if n <= 0:
            raise ValueError("n: must be positive")
        # accept u64 draws below the largest multiple of n that fits in 64 bits
        limit = (MASK64 + 1) - ((MASK64 + 1) % n)
        while True:
            u = self.u64()
            if u < limit:
                return u % n

    def shuffle(self, xs: list) -> None:
        """In-place Fisher-Yates shuffle."""
        for i in range(len(xs) - 1, 0, -1):
            k = self.below(i + 1)
            xs[i], xs[k] = xs[k], xs[i]

    def choose(self, population_size: int, k: int) -> list[int]:
        """k distinct indices from range(population_size), in selection order.

        Partial Fisher-Yates; uniform over ordered k-subsets.
        """
        if not 0 <= k <= population_size:
            raise ValueError("k: must satisfy 0 <= k <= population_size")
        idx = list(range(population_size))
        for t in range(k):
            r = t + self.below(population_size - t)
            idx[t], idx[r] = idx[r], idx[t]
        return idx[:k]

    def bernoulli_indices(self, count: int, p: float) -> list[int]:
        """Indices t in range(count) whose independent coin (prob p) lands heads."""
        return [t for t in range(count) if self.random() < p]
