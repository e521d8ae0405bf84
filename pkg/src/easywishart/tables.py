"""Exponent words, moment tables and atomic measures, with their text formats.

An exponent word is a string over ``"1"`` and ``"*"``; ``"1*1*"`` stands for
``X X^* X X^*``. Complex values serialize as ``"re,im"`` using ``repr`` floats
so that parsing gives back the same numbers.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Iterator, Mapping

__all__ = [
    "all_words",
    "check_word",
    "word_signs",
    "format_complex",
    "parse_complex",
    "MomentTable",
    "AtomicMeasure",
]

LETTERS = ("1", "*")


def check_word(word: str) -> str:
    if not isinstance(word, str) or any(ch not in LETTERS for ch in word):
        raise ValueError(f"exponent word must be a string over '1' and '*', got {word!r}")
    return word


def all_words(p_max: int, include_empty: bool = True) -> Iterator[str]:
    """Every exponent word of length up to ``p_max``, shortest first."""
    start = 0 if include_empty else 1
    for p in range(start, p_max + 1):
        for letters in product(LETTERS, repeat=p):
            yield "".join(letters)


def word_signs(word: str) -> tuple[int, ...]:
    """``1 -> +1``, ``* -> -1``."""
    return tuple(1 if ch == "1" else -1 for ch in check_word(word))


def format_complex(z: complex) -> str:
    z = complex(z)
    return f"{z.real!r},{z.imag!r}"


def parse_complex(text: str) -> complex:
    re_part, im_part = text.split(",")
    return complex(float(re_part), float(im_part))


@dataclass
class MomentTable:
    """Complex moments keyed by exponent word.

    ``order`` is the largest word length the table was built for; the empty
    word always maps to 1.
    """

    order: int
    values: dict[str, complex] = field(default_factory=dict)

    def __post_init__(self):
        self.values = {check_word(w): complex(v) for w, v in self.values.items()}
        self.values.setdefault("", 1 + 0j)
        if self.values[""] != 1:
            raise ValueError("the empty word must map to 1")

    def __getitem__(self, word: str) -> complex:
        return self.values[word]

    def __contains__(self, word: str) -> bool:
        return word in self.values

    def __iter__(self):
        return iter(self.values)

    def __len__(self):
        return len(self.values)

    def items(self):
        return self.values.items()

    def plain(self) -> list[complex]:
        """Moments for the words ``"1" * p``, ``p = 1..order``."""
        return [self.values["1" * p] for p in range(1, self.order + 1)]

    def scaled(self, factor: complex) -> "MomentTable":
        """Moments of ``factor * X`` given those of ``X``.

        ``factor`` is taken real, so ``(factor X)^* = factor X^*``.
        """
        return MomentTable(
            self.order, {w: v * factor ** len(w) for w, v in self.values.items()}
        )

    def max_abs_difference(self, other: "MomentTable") -> float:
        shared = set(self.values) & set(other.values)
        return max((abs(self.values[w] - other.values[w]) for w in shared), default=0.0)

    def allclose(self, other: "MomentTable", tol: float = 1e-9) -> bool:
        if set(self.values) != set(other.values):
            return False
        return all(
            abs(self.values[w] - other.values[w]) <= tol * max(1.0, abs(other.values[w]))
            for w in self.values
        )

    def to_dict(self) -> dict:
        return {
            "order": self.order,
            "moments": {w: format_complex(v) for w, v in self.values.items()},
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "MomentTable":
        return cls(
            int(data["order"]),
            {w: parse_complex(v) for w, v in data["moments"].items()},
        )

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def loads(cls, text: str) -> "MomentTable":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class AtomicMeasure:
    """A positive measure ``sum_i c_i delta_{z_i}`` with finitely many atoms."""

    atoms: tuple[tuple[float, complex], ...]

    def __post_init__(self):
        cleaned = tuple((float(c), complex(z)) for c, z in self.atoms)
        if any(c <= 0 for c, _ in cleaned):
            raise ValueError("atom weights must be strictly positive")
        locations = [z for _, z in cleaned]
        if len(set(locations)) != len(locations):
            raise ValueError("atom locations must be distinct")
        object.__setattr__(self, "atoms", cleaned)

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[float, complex]]) -> "AtomicMeasure":
        """Merge repeated locations and drop zero weights."""
        merged: dict[complex, float] = {}
        for c, z in pairs:
            merged[complex(z)] = merged.get(complex(z), 0.0) + float(c)
        return cls(tuple((c, z) for z, c in merged.items() if c > 0))

    @property
    def mass(self) -> float:
        return sum(c for c, _ in self.atoms)

    def scaled(self, t: float) -> "AtomicMeasure":
        """The measure ``t * mu`` (weights multiplied, locations kept)."""
        if t <= 0:
            raise ValueError("scale must be positive")
        return AtomicMeasure(tuple((t * c, z) for c, z in self.atoms))

    def to_lines(self) -> list[str]:
        return [f"{c!r},{z.real!r},{z.imag!r}" for c, z in self.atoms]

    @classmethod
    def from_lines(cls, lines: Iterable[str]) -> "AtomicMeasure":
        atoms = []
        for line in lines:
            line = line.strip()
            if not line:
                continue
            c, re_part, im_part = line.split(",")
            atoms.append((float(c), complex(float(re_part), float(im_part))))
        return cls(tuple(atoms))
