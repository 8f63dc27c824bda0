"""Seeded 64-bit generator (splitmix64) behind every randomized operation.

All randomness in the package flows through this module, never through OS
entropy or wall-clock state, so every seeded result is reproducible
bit-for-bit.  The stream is defined by its update constants and can be
reimplemented in any language:

    state   <- (state + 0x9E3779B97F4A7C15) mod 2^64
    output  <- mix(state)   with
    mix(z):  z ^= z >> 30;  z *= 0xBF58476D1CE4E5B9;  z mod 2^64
             z ^= z >> 27;  z *= 0x94D049BB133111EB;  z mod 2^64
             z ^= z >> 31

Uniform doubles fill the 53-bit mantissa: u = (output >> 11) * 2**-53.
"""

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB

DEFAULT_SEED = 1729


def mix64(z: int) -> int:
    """Finalizer of splitmix64; a bijection on 64-bit integers."""
    z &= _MASK64
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
    return z ^ (z >> 31)


def derive_seed(seed: int, index: int) -> int:
    """Child seed for stream `index`; distinct indices give independent streams."""
    return mix64((seed ^ mix64(index + 1)) & _MASK64)


class SplitMix64:
    """Minimal splitmix64 stream."""

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK64
        return mix64(self._state)

    def uniform(self) -> float:
        """Uniform double in [0, 1) with 53 random mantissa bits."""
        return (self.next_u64() >> 11) * 2.0**-53

    def randint(self, m: int) -> int:
        """Uniform integer in [0, m) by rejection (no modulo bias)."""
        if m <= 0:
            raise ValueError("randint bound must be positive")
        limit = _MASK64 - (_MASK64 + 1) % m
        while True:
            u = self.next_u64()
            if u <= limit:
                return u % m
