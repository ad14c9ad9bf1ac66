"""Seedable randomness with documented, cross-language-reproducible seed mixing.

Every experiment derives per-trial seeds from a 64-bit master seed with the
SplitMix64 finalizer, so the seed schedule can be reproduced in any language
from the constants below:

    gamma = 0x9E3779B97F4A7C15
    mix(z):  z ^= z >> 30;  z *= 0xBF58476D1CE4E5B9
             z ^= z >> 27;  z *= 0x94D049BB133111EB
             z ^= z >> 31
    derive(master, i1, i2, ...):
        s = mix(master)
        for i in (i1, i2, ...):  s = mix(s + (i + 1) * gamma)

All arithmetic is modulo 2**64. Streams themselves are numpy PCG64
generators seeded with the derived value.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
_MIX_MULT_1 = 0xBF58476D1CE4E5B9
_MIX_MULT_2 = 0x94D049BB133111EB


def mix64(z: int) -> int:
    """SplitMix64 finalizer: avalanche a 64-bit value."""
    z &= _MASK64
    z = ((z ^ (z >> 30)) * _MIX_MULT_1) & _MASK64
    z = ((z ^ (z >> 27)) * _MIX_MULT_2) & _MASK64
    return z ^ (z >> 31)


def derive_seed(master_seed: int, *indices: int) -> int:
    """Mix a master seed with trial/cell indices into an independent 64-bit seed.

    The same (master, indices) tuple always yields the same seed; distinct
    tuples yield avalanche-decorrelated seeds.
    """
    s = mix64(master_seed)
    for i in indices:
        s = mix64((s + (i + 1) * GOLDEN_GAMMA) & _MASK64)
    return s


class RandomStream:
    """Stateful random stream: a numpy PCG64 generator plus its originating seed.

    Consecutive draws advance the stream; two streams built from the same
    seed produce identical draw sequences.
    """

    def __init__(self, seed: int):
        self.seed = seed & _MASK64
        self._gen = np.random.default_rng(self.seed)

    def __repr__(self) -> str:
        return f"RandomStream(seed={self.seed})"

    def uniforms(self, count: int) -> np.ndarray:
        """`count` independent U[0,1) doubles."""
        return self._gen.random(count)

    def permutation(self, n: int) -> np.ndarray:
        return self._gen.permutation(n)

    def integers(self, low: int, high: int, size=None):
        return self._gen.integers(low, high, size=size)

    def shuffle(self, seq) -> None:
        self._gen.shuffle(seq)

    def spawn(self, *indices: int) -> "RandomStream":
        """Independent child stream at a reproducible address below this one."""
        return RandomStream(derive_seed(self.seed, *indices))
