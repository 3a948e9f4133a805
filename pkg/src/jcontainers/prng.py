"""Seeded 64-bit PRNG used everywhere randomness is needed.

The generator is splitmix64 (Steele, Lea, Flood 2014): a 64-bit counter
stepped by the golden-gamma constant and finalised with two xor-shift
multiplies.  It is trivially portable, so identical seeds give identical
streams on every platform, which is what the reproducibility contract of the
experiment harness requires.  Python ints are unbounded, hence the explicit
masking to 64 bits.
"""

MASK64 = (1 << 64) - 1


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def bit(self) -> int:
        """One unbiased bit (the low bit of a fresh word)."""
        return self.next_u64() & 1

    def below(self, n: int) -> int:
        """Uniform integer in [0, n) by rejection on the top of the word."""
        if n <= 0:
            raise ValueError("below() needs n >= 1")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            x = self.next_u64()
            if x < limit:
                return x % n

    def float01(self) -> float:
        """Uniform float in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def sample_mask(self, n: int, size: int) -> int:
        """Uniform ``size``-subset of [0, n) as a bitmask (Floyd's method)."""
        if size > n:
            raise ValueError("sample size exceeds universe")
        chosen = 0
        for j in range(n - size, n):
            t = self.below(j + 1)
            if chosen >> t & 1:
                chosen |= 1 << j
            else:
                chosen |= 1 << t
        return chosen
