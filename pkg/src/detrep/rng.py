"""SplitMix64: a small, portable, seedable generator with 64-bit state.

Algorithm (Steele, Lea & Flood 2014, as used to seed xoshiro)::

    state += 0x9E3779B97F4A7C15
    z = state
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    return z ^ (z >> 31)

all arithmetic modulo 2**64.  Doubles in [0, 1) use the top 53 bits.  The
same streams can be reproduced in any language with 64-bit integers.
"""

import math

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def mix64(z):
    """The SplitMix64 finalizer, a bijection on 64-bit integers."""
    z &= _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def derive_seed(seed, *keys):
    """Deterministically combine a seed with integer keys (e.g. a sample index)."""
    h = mix64(seed + _GOLDEN)
    for k in keys:
        h = mix64(h ^ mix64(k + _GOLDEN))
    return h


class SplitMix64:
    def __init__(self, seed=0):
        self.state = seed & _MASK

    def next_u64(self):
        self.state = (self.state + _GOLDEN) & _MASK
        return mix64(self.state)

    def random(self):
        """Uniform double in [0, 1)."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def uniform(self, lo=0.0, hi=1.0):
        return lo + (hi - lo) * self.random()

    def angle(self):
        return 2.0 * math.pi * self.random()

    def normal(self):
        """Standard normal variate (Box-Muller, one of the pair)."""
        u1 = 1.0 - self.random()
        u2 = self.random()
        return math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)

    def uniform_array(self, count, field="real"):
        """``count`` samples, uniform on [0, 1] or on the unit square in C."""
        if field == "real":
            return [complex(self.random(), 0.0) for _ in range(count)]
        if field == "complex":
            return [complex(self.random(), self.random()) for _ in range(count)]
        raise ValueError(f"unknown field {field!r}")
