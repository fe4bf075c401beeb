"""Portable deterministic random number generation.

All puzzle generation randomness flows through :class:`SplitMix64`, the
splitmix64 generator (Steele, Lea & Flood, 2014; the seeding generator of
Java's ``SplittableRandom``).  It is a named, fixed algorithm over 64-bit
integer arithmetic, so identical seeds produce identical puzzles on every
platform and Python version.
"""

from __future__ import annotations

from typing import Sequence, TypeVar

MASK64 = (1 << 64) - 1

_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB

T = TypeVar("T")


def mix64(x: int) -> int:
    """One application of the splitmix64 output finalizer to ``x``."""
    z = (x + _GAMMA) & MASK64
    z = ((z ^ (z >> 30)) * _MIX1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & MASK64
    return (z ^ (z >> 31)) & MASK64


def derive_seed(base_seed: int, stream: int) -> int:
    """Derive an independent 64-bit seed for ``stream`` from ``base_seed``.

    Fixed mixing: ``mix64(base ^ mix64(stream))``.  Distinct streams of one
    base seed get unrelated generator states while the whole run stays
    reproducible from the base seed alone.
    """
    return mix64((base_seed & MASK64) ^ mix64(stream & MASK64))


class SplitMix64:
    """Sequential splitmix64 stream with small sampling helpers."""

    def __init__(self, seed: int):
        self._state = seed & MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * _MIX1) & MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & MASK64
        return (z ^ (z >> 31)) & MASK64

    def below(self, n: int) -> int:
        """Uniform integer in ``[0, n)``, unbiased via rejection sampling."""
        if n <= 0:
            raise ValueError("below() requires n >= 1")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            draw = self.next_u64()
            if draw < limit:
                return draw % n

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in the inclusive range ``[lo, hi]``."""
        if hi < lo:
            raise ValueError("randint() requires lo <= hi")
        return lo + self.below(hi - lo + 1)

    def choice(self, seq: Sequence[T]) -> T:
        if not seq:
            raise ValueError("choice() on empty sequence")
        return seq[self.below(len(seq))]

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates shuffle."""
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]

    def sample(self, seq: Sequence[T], k: int) -> list[T]:
        """``k`` distinct elements drawn without replacement, order random."""
        if k < 0 or k > len(seq):
            raise ValueError(f"cannot sample {k} from {len(seq)} elements")
        pool = list(seq)
        picked: list[T] = []
        for _ in range(k):
            idx = self.below(len(pool))
            picked.append(pool.pop(idx))
        return picked
