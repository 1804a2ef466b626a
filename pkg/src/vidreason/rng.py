"""Deterministic, platform-independent random streams.

Every generator draws from a counter-based SplitMix64 stream keyed by
(seed, *labels), so the same seed reproduces byte-identical output on any
platform and tasks can be generated in parallel without shared state.
"""
from __future__ import annotations

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


def _mix64(z: int) -> int:
    z &= _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def _fnv1a64(data: bytes) -> int:
    h = 0xCBF29CE484222325
    for b in data:
        h = ((h ^ b) * 0x100000001B3) & _MASK64
    return h


class Rng:
    """SplitMix64 stream keyed by an integer seed plus string/int labels."""

    __slots__ = ("_state",)

    def __init__(self, seed: int, *labels: object):
        key = "/".join(str(x) for x in labels)
        self._state = _mix64((seed & _MASK64) ^ _fnv1a64(key.encode("utf-8")))

    def u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK64
        return _mix64(self._state)

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi], both ends inclusive."""
        if hi < lo:
            raise ValueError(f"empty range [{lo}, {hi}]")
        n = hi - lo + 1
        limit = ((1 << 64) // n) * n
        while True:
            v = self.u64()
            if v < limit:
                return lo + v % n

    def random(self) -> float:
        """Uniform float in [0, 1) with 53 bits of precision."""
        return (self.u64() >> 11) * (2.0 ** -53)

    def uniform(self, a: float, b: float) -> float:
        return a + (b - a) * self.random()

    def choice(self, seq):
        if not seq:
            raise ValueError("choice from empty sequence")
        return seq[self.randint(0, len(seq) - 1)]

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates shuffle."""
        for i in range(len(items) - 1, 0, -1):
            j = self.randint(0, i)
            items[i], items[j] = items[j], items[i]

    def sample(self, seq, k: int) -> list:
        if k > len(seq):
            raise ValueError(f"sample size {k} exceeds population {len(seq)}")
        pool = list(seq)
        self.shuffle(pool)
        return pool[:k]

    def split(self, *labels: object) -> "Rng":
        """Independent child stream keyed by this stream plus extra labels."""
        child = Rng.__new__(Rng)
        child._state = _mix64(self.u64() ^ _fnv1a64("/".join(str(x) for x in labels).encode("utf-8")))
        return child
