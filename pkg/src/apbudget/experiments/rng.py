"""Portable seeded randomness: xorshift64* seeded through SplitMix64.

The stream depends only on the 64-bit seed, so scenario generation is
identical on every platform and Python version.  Sub-seeds are derived with
``derive_seed(seed, k1, k2, ...)``, which folds each key in as
``x = splitmix64(x ^ k)``.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive_seed(seed: int, *keys: int) -> int:
    x = seed & MASK64
    for k in keys:
        x = splitmix64(x ^ (k & MASK64))
    return x


class Rng:
    """xorshift64* (Vigna 2014), shifts 12/25/27, multiplier 0x2545F4914F6CDD1D."""

    def __init__(self, seed: int):
        self.seed = seed & MASK64
        self.state = splitmix64(self.seed) or 0x9E3779B97F4A7C15

    def next_u64(self) -> int:
        x = self.state
        x ^= x >> 12
        x ^= (x << 25) & MASK64
        x ^= x >> 27
        self.state = x
        return (x * 0x2545F4914F6CDD1D) & MASK64

    def random(self) -> float:
        """Uniform float in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi], unbiased by rejection."""
        if hi < lo:
            raise ValueError(f"empty range [{lo}, {hi}]")
        span = hi - lo + 1
        if span > MASK64:
            raise ValueError("range too wide")
        cutoff = (1 << 64) - (1 << 64) % span
        while True:
            r = self.next_u64()
            if r < cutoff:
                return lo + r % span

    def bernoulli(self, p: float) -> bool:
        return self.random() < p

    def choice(self, seq):
        return seq[self.randint(0, len(seq) - 1)]

    def sample(self, seq, k: int) -> list:
        """k distinct elements, in draw order (partial Fisher-Yates)."""
        pool = list(seq)
        for i in range(k):
            j = self.randint(i, len(pool) - 1)
            pool[i], pool[j] = pool[j], pool[i]
        return pool[:k]
