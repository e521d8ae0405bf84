"""Permutations of ``{0, ..., p-1}`` stored as image tuples."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations as _itertools_permutations
from typing import Iterator

__all__ = ["Permutation", "all_permutations"]


@dataclass(frozen=True)
class Permutation:
    """A bijection ``x -> image[x]``.

    Products compose right to left: ``(s * t)(x) == s(t(x))``.
    """

    image: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.image) != list(range(len(self.image))):
            raise ValueError(f"{self.image} is not a permutation")

    @classmethod
    def identity(cls, p: int) -> "Permutation":
        return cls(tuple(range(p)))

    @classmethod
    def standard_cycle(cls, p: int) -> "Permutation":
        """``0 -> 1 -> ... -> p-1 -> 0``."""
        return cls(tuple((x + 1) % p for x in range(p)))

    @property
    def size(self) -> int:
        return len(self.image)

    def __call__(self, x: int) -> int:
        return self.image[x]

    def __mul__(self, other: "Permutation") -> "Permutation":
        if self.size != other.size:
            raise ValueError("size mismatch")
        return Permutation(tuple(self.image[y] for y in other.image))

    def __pow__(self, k: int) -> "Permutation":
        out = Permutation.identity(self.size)
        base = self if k >= 0 else self.inverse()
        for _ in range(abs(k)):
            out = out * base
        return out

    def inverse(self) -> "Permutation":
        inv = [0] * self.size
        for x, y in enumerate(self.image):
            inv[y] = x
        return Permutation(tuple(inv))

    def cycles(self) -> list[tuple[int, ...]]:
        seen = [False] * self.size
        out = []
        for start in range(self.size):
            if seen[start]:
                continue
            cycle = []
            x = start
            while not seen[x]:
                seen[x] = True
                cycle.append(x)
                x = self.image[x]
            out.append(tuple(cycle))
        return out

    @property
    def cycle_count(self) -> int:
        return len(self.cycles())

    def sign(self) -> int:
        return -1 if (self.size - self.cycle_count) % 2 else 1


def all_permutations(p: int) -> Iterator[Permutation]:
    for image in _itertools_permutations(range(p)):
        yield Permutation(image)
