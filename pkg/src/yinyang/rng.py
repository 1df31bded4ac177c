"""Seeded xoshiro256** generator.

State is seeded from a 64-bit integer through splitmix64, and doubles use
the top 53 bits of each output, so a stream is reproducible in any language
that implements the published algorithms.

The hot paths are compiled with numba; the generator state is a 4-element
``uint64`` array that the compiled helpers mutate in place.
"""

import math

import numpy as np
from numba import njit, uint64

_MASK64 = (1 << 64) - 1


def splitmix64(x):
    """Advance a splitmix64 state. Returns ``(new_state, output)``."""
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x, z ^ (z >> 31)


@njit(cache=True)
def _rotl(x, k):
    return (x << uint64(k)) | (x >> uint64(64 - k))


@njit(cache=True)
def _next(s):
    result = _rotl(s[1] * uint64(5), 7) * uint64(9)
    t = s[1] << uint64(17)
    s[2] ^= s[0]
    s[3] ^= s[1]
    s[1] ^= s[2]
    s[0] ^= s[3]
    s[2] ^= t
    s[3] = _rotl(s[3], 45)
    return result


@njit(cache=True)
def _next_double(s):
    return float(_next(s) >> uint64(11)) * (1.0 / 9007199254740992.0)


@njit(cache=True)
def _fill_doubles(s, out):
    for i in range(out.shape[0]):
        out[i] = _next_double(s)


@njit(cache=True)
def _shuffle(s, a):
    # Fisher-Yates from the top; index drawn as floor(u * (i + 1)).
    for i in range(a.shape[0] - 1, 0, -1):
        j = int(_next_double(s) * (i + 1))
        tmp = a[i]
        a[i] = a[j]
        a[j] = tmp


class Xoshiro256:
    """xoshiro256** stream seeded via splitmix64.

    >>> r = Xoshiro256(42)
    >>> 0.0 <= r.uniform() < 1.0
    True
    """

    def __init__(self, seed):
        seed = int(seed)
        if not 0 <= seed <= _MASK64:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
        self.seed = seed
        words = []
        x = seed
        for _ in range(4):
            x, z = splitmix64(x)
            words.append(z)
        self.state = np.array(words, dtype=np.uint64)

    def next_u64(self):
        return int(_next(self.state))

    def uniform(self):
        """One double in [0, 1) built from the top 53 bits."""
        return _next_double(self.state)

    def uniform_array(self, n):
        out = np.empty(int(n), dtype=np.float64)
        _fill_doubles(self.state, out)
        return out

    def below(self, n):
        """Integer in [0, n) as ``floor(uniform() * n)``."""
        return int(_next_double(self.state) * n)

    def shuffle(self, a):
        """Shuffle a 1-d numpy array in place."""
        _shuffle(self.state, a)

    def exponential(self, rate):
        """Exponential variate with the given rate, by inversion."""
        return -math.log1p(-_next_double(self.state)) / rate


def rng_new(seed):
    return Xoshiro256(seed)
