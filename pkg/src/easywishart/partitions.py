"""Set partitions between two rows of points.

A partition in ``P(k, l)`` lives on ``k`` upper points and ``l`` lower points.
Positions are numbered in reading order: upper row left to right, then lower
row left to right. Block labels are canonical, i.e. labels appear in order of
first occurrence, so two partitions are equal iff their label tuples are.

Crossings are read along the boundary of the rectangle: upper row left to
right, then lower row right to left.
"""

from __future__ import annotations

import string
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterator, Sequence

from easywishart.permutations import Permutation

__all__ = [
    "MAX_POINTS",
    "Partition",
    "parse_partition",
    "enumerate_partitions",
    "is_noncrossing",
    "noncrossing_partitions",
    "kernel",
    "delta",
    "is_coarser",
    "common_coarsening",
    "middle_symmetry",
    "adjoint",
    "tensor",
    "vertical_compose",
    "signature",
    "signature_by_switch_search",
    "crossing_count",
    "nc_to_permutation",
    "orbit_partition",
    "kreweras",
    "horizontal_pairing",
    "half_pairing",
]

#: Enumeration guard; Bell numbers explode beyond this.
MAX_POINTS = 16

_LETTERS = string.ascii_lowercase


def _canonical(labels: Sequence[int]) -> tuple[int, ...]:
    relabel: dict = {}
    return tuple(relabel.setdefault(x, len(relabel)) for x in labels)


@dataclass(frozen=True)
class Partition:
    """A partition of ``upper`` + ``lower`` points, stored as canonical labels."""

    upper: int
    lower: int
    labels: tuple[int, ...]

    def __post_init__(self):
        if self.upper < 0 or self.lower < 0:
            raise ValueError("row lengths must be nonnegative")
        if len(self.labels) != self.upper + self.lower:
            raise ValueError(
                f"expected {self.upper + self.lower} labels, got {len(self.labels)}"
            )
        if _canonical(self.labels) != tuple(self.labels):
            raise ValueError("labels are not in canonical first-occurrence form")

    @classmethod
    def from_labels(cls, upper: int, lower: int, labels: Sequence) -> "Partition":
        """Build from arbitrary hashable labels, canonicalizing them."""
        return cls(upper, lower, _canonical(labels))

    @classmethod
    def from_blocks(cls, upper: int, lower: int, blocks) -> "Partition":
        """Build from an iterable of blocks of 0-based positions."""
        labels = [None] * (upper + lower)
        for b, block in enumerate(blocks):
            for x in block:
                if labels[x] is not None:
                    raise ValueError(f"position {x} appears in two blocks")
                labels[x] = b
        if any(v is None for v in labels):
            raise ValueError("blocks do not cover every position")
        return cls.from_labels(upper, lower, labels)

    @property
    def size(self) -> int:
        return self.upper + self.lower

    @property
    def n_blocks(self) -> int:
        return max(self.labels) + 1 if self.labels else 0

    def __len__(self) -> int:
        return self.n_blocks

    @property
    def upper_labels(self) -> tuple[int, ...]:
        return self.labels[: self.upper]

    @property
    def lower_labels(self) -> tuple[int, ...]:
        return self.labels[self.upper :]

    def blocks(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in range(self.n_blocks)]
        for pos, lab in enumerate(self.labels):
            out[lab].append(pos)
        return tuple(tuple(b) for b in out)

    def block_sizes(self) -> tuple[int, ...]:
        sizes = [0] * self.n_blocks
        for lab in self.labels:
            sizes[lab] += 1
        return tuple(sizes)

    @property
    def is_even(self) -> bool:
        return all(size % 2 == 0 for size in self.block_sizes())

    def boundary_order(self) -> tuple[int, ...]:
        """Positions listed along the rectangle boundary."""
        k = self.upper
        return tuple(range(k)) + tuple(range(self.size - 1, k - 1, -1))

    def boundary_word(self) -> tuple[int, ...]:
        return _canonical(self.labels[x] for x in self.boundary_order())

    def __str__(self) -> str:
        if self.n_blocks > len(_LETTERS):
            raise ValueError("too many blocks for the letter notation")
        up = "".join(_LETTERS[x] for x in self.upper_labels)
        low = "".join(_LETTERS[x] for x in self.lower_labels)
        return f"{up}/{low}"

    def picture(self) -> str:
        """Two-row letter grid, one column per point."""
        up, low = str(self).split("/")
        return " ".join(up) + "\n" + " ".join(low)


def parse_partition(text: str) -> Partition:
    """Parse a literal such as ``"ab/ba"`` (upper row, slash, lower row).

    Equal letters denote the same block across both rows; ``"/abc"`` is a
    partition of three lower points.
    """
    if not isinstance(text, str) or text.count("/") != 1:
        raise ValueError(f"malformed partition literal {text!r}: need exactly one '/'")
    up, low = text.strip().split("/")
    if not up and not low:
        raise ValueError("partition literal has two empty rows")
    for ch in up + low:
        if ch not in _LETTERS:
            raise ValueError(f"malformed partition literal {text!r}: bad character {ch!r}")
    return Partition.from_labels(len(up), len(low), up + low)


def _restricted_growth(n: int) -> Iterator[tuple[int, ...]]:
    if n == 0:
        yield ()
        return
    labels = [0] * n
    maxima = [0] * n

    def rec(i):
        if i == n:
            yield tuple(labels)
            return
        for v in range(maxima[i - 1] + 2):
            labels[i] = v
            maxima[i] = max(maxima[i - 1], v)
            yield from rec(i + 1)

    yield from rec(1)


def enumerate_partitions(k: int, l: int, even_only: bool = False) -> list[Partition]:
    """All partitions in ``P(k, l)``, optionally restricted to even blocks."""
    if k < 0 or l < 0 or k + l < 1:
        raise ValueError("need k, l >= 0 and k + l >= 1")
    if k + l > MAX_POINTS:
        raise ValueError(f"refusing to enumerate partitions of {k + l} > {MAX_POINTS} points")
    out = []
    for labels in _restricted_growth(k + l):
        pi = Partition(k, l, labels)
        if even_only and not pi.is_even:
            continue
        out.append(pi)
    return out


def _word_crosses(word: Sequence[int]) -> bool:
    # a < b < c < d with word[a] == word[c] != word[b] == word[d]
    n = len(word)
    for a, b in combinations(range(n), 2):
        if word[a] == word[b]:
            continue
        x, y = word[a], word[b]
        for c in range(b + 1, n):
            if word[c] == x and any(word[d] == y for d in range(c + 1, n)):
                return True
    return False


def is_noncrossing(pi: Partition) -> bool:
    return not _word_crosses(pi.boundary_word())


@lru_cache(maxsize=None)
def noncrossing_partitions(p: int) -> tuple[Partition, ...]:
    """All noncrossing partitions of ``p`` points, as elements of ``P(0, p)``."""
    if p < 0:
        raise ValueError("p must be nonnegative")
    if p == 0:
        return (Partition(0, 0, ()),)
    return tuple(
        Partition(0, p, labels)
        for labels in _restricted_growth(p)
        if not _word_crosses(labels)
    )


def kernel(upper_values: Sequence, lower_values: Sequence) -> Partition:
    """Partition grouping positions that carry equal values."""
    return Partition.from_labels(
        len(upper_values), len(lower_values), tuple(upper_values) + tuple(lower_values)
    )


def _check_shape(*parts: Partition):
    first = parts[0]
    for other in parts[1:]:
        if (other.upper, other.lower) != (first.upper, first.lower):
            raise ValueError(
                f"shape mismatch: P({first.upper},{first.lower}) vs P({other.upper},{other.lower})"
            )


def delta(pi: Partition, upper_values: Sequence, lower_values: Sequence) -> int:
    """Kronecker symbol: 1 iff every block of ``pi`` carries a constant value."""
    if len(upper_values) != pi.upper or len(lower_values) != pi.lower:
        raise ValueError("index tuples do not match the partition shape")
    seen: dict = {}
    for lab, v in zip(pi.labels, tuple(upper_values) + tuple(lower_values)):
        if seen.setdefault(lab, v) != v:
            return 0
    return 1


def is_coarser(sigma: Partition, pi: Partition) -> bool:
    """True iff every block of ``pi`` lies inside a block of ``sigma``."""
    _check_shape(sigma, pi)
    rep: dict = {}
    for a, b in zip(pi.labels, sigma.labels):
        if rep.setdefault(a, b) != b:
            return False
    return True


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def _join_labels(n: int, *labelings: Sequence[int]) -> _UnionFind:
    uf = _UnionFind(n)
    for labels in labelings:
        first: dict = {}
        for pos, lab in enumerate(labels):
            uf.union(first.setdefault(lab, pos), pos)
    return uf


def common_coarsening(sigma: Partition, tau: Partition) -> Partition:
    """Finest partition coarser than both arguments."""
    _check_shape(sigma, tau)
    uf = _join_labels(sigma.size, sigma.labels, tau.labels)
    return Partition.from_labels(sigma.upper, sigma.lower, [uf.find(x) for x in range(sigma.size)])


def middle_symmetry(pi: Partition) -> Partition:
    """Swap the left and right halves of both rows of a ``P(2s, 2s)`` partition."""
    if pi.upper != pi.lower or pi.upper % 2:
        raise ValueError("middle symmetry needs a partition in P(2s, 2s)")
    s = pi.upper // 2
    up, low = pi.upper_labels, pi.lower_labels
    new_up = [up[(x + s) % (2 * s)] for x in range(2 * s)]
    new_low = [low[(x + s) % (2 * s)] for x in range(2 * s)]
    return Partition.from_labels(pi.upper, pi.lower, new_up + new_low)


def adjoint(pi: Partition) -> Partition:
    """Exchange the two rows."""
    return Partition.from_labels(pi.lower, pi.upper, pi.lower_labels + pi.upper_labels)


def tensor(pi: Partition, sigma: Partition) -> Partition:
    """Horizontal concatenation: ``pi`` on the left, ``sigma`` on the right."""
    shift = pi.n_blocks
    up = pi.upper_labels + tuple(x + shift for x in sigma.upper_labels)
    low = pi.lower_labels + tuple(x + shift for x in sigma.lower_labels)
    return Partition.from_labels(pi.upper + sigma.upper, pi.lower + sigma.lower, up + low)


def vertical_compose(top: Partition, bottom: Partition) -> tuple[Partition, int]:
    """Stack ``top`` over ``bottom``, gluing the middle rows.

    Returns the induced partition on the outer points and the number of
    closed loops (components touching only glued points).
    """
    if top.lower != bottom.upper:
        raise ValueError(
            f"cannot glue {top.lower} lower points onto {bottom.upper} upper points"
        )
    k, l, m = top.upper, top.lower, bottom.lower
    uf = _UnionFind(k + l + m)
    top_nodes = list(range(k + l))
    bottom_nodes = list(range(k, k + l + m))
    for nodes, labels in ((top_nodes, top.labels), (bottom_nodes, bottom.labels)):
        first: dict = {}
        for node, lab in zip(nodes, labels):
            uf.union(first.setdefault(lab, node), node)
    outer = list(range(k)) + list(range(k + l, k + l + m))
    outer_roots = {uf.find(x) for x in outer}
    middle_roots = {uf.find(x) for x in range(k, k + l)}
    loops = len(middle_roots - outer_roots)
    result = Partition.from_labels(k, m, [uf.find(x) for x in outer])
    return result, loops


def crossing_count(word: Sequence[int]) -> int:
    """Number of crossing pairs among the 2-element blocks of a pairing word."""
    pairs: dict = {}
    for pos, lab in enumerate(word):
        pairs.setdefault(lab, []).append(pos)
    chords = list(pairs.values())
    if any(len(c) != 2 for c in chords):
        raise ValueError("crossing_count expects a pairing")
    count = 0
    for (a, b), (c, d) in combinations(chords, 2):
        if a < c < b < d or c < a < d < b:
            count += 1
    return count


def _consecutive_pairing(word: Sequence[int]) -> list[int]:
    legs: dict = {}
    for pos, lab in enumerate(word):
        legs.setdefault(lab, []).append(pos)
    out = [0] * len(word)
    pair_id = 0
    for positions in legs.values():
        for i in range(0, len(positions), 2):
            out[positions[i]] = out[positions[i + 1]] = pair_id
            pair_id += 1
    return out


@lru_cache(maxsize=65536)
def _signature_of_word(word: tuple[int, ...]) -> int:
    return -1 if crossing_count(_consecutive_pairing(word)) % 2 else 1


def signature(pi: Partition) -> int:
    """Twisting sign of an even partition.

    Each block's legs are paired consecutively along the boundary; the sign
    is the parity of the crossings of that pairing.
    """
    if not pi.is_even:
        raise ValueError(f"signature needs even blocks, got {pi}")
    return _signature_of_word(pi.boundary_word())


def signature_by_switch_search(pi: Partition) -> int:
    """Sign from a breadth-first search over adjacent leg switches.

    Slow reference route, limited to 8 points.
    """
    if not pi.is_even:
        raise ValueError(f"signature needs even blocks, got {pi}")
    if pi.size > 8:
        raise ValueError("switch search is limited to 8 points")
    start = pi.boundary_word()
    dist = {start: 0}
    queue = deque([start])
    while queue:
        word = queue.popleft()
        if not _word_crosses(word):
            return -1 if dist[word] % 2 else 1
        for i in range(len(word) - 1):
            if word[i] == word[i + 1]:
                continue
            nxt = list(word)
            nxt[i], nxt[i + 1] = nxt[i + 1], nxt[i]
            nxt = tuple(nxt)
            if nxt not in dist:
                dist[nxt] = dist[word] + 1
                queue.append(nxt)
    raise RuntimeError("no noncrossing arrangement reached")  # pragma: no cover


def _one_row_blocks(sigma: Partition) -> tuple[tuple[int, ...], ...]:
    if sigma.upper and sigma.lower:
        raise ValueError("expected a one-row partition")
    return sigma.blocks()


def nc_to_permutation(sigma: Partition) -> Permutation:
    """Cycle through each block in increasing order."""
    if not is_noncrossing(sigma):
        raise ValueError(f"{sigma} is crossing")
    image = list(range(sigma.size))
    for block in _one_row_blocks(sigma):
        for a, b in zip(block, block[1:] + block[:1]):
            image[a] = b
    return Permutation(tuple(image))


def orbit_partition(perm: Permutation) -> Partition:
    """Partition of ``{0..p-1}`` into the cycles of ``perm``, in ``P(0, p)``."""
    labels = [None] * perm.size
    for c, cycle in enumerate(perm.cycles()):
        for x in cycle:
            labels[x] = c
    return Partition.from_labels(0, perm.size, labels)


def kreweras(sigma: Partition) -> Partition:
    """Kreweras complement of a noncrossing partition."""
    p = sigma.size
    perm = nc_to_permutation(sigma)
    gamma = Permutation.standard_cycle(p)
    return orbit_partition(perm.inverse() * gamma)


def horizontal_pairing(s: int) -> Partition:
    """The pairing in ``P(2s, 2s)`` joining ``x`` to ``x + s`` on each row."""
    up = [x % s for x in range(2 * s)]
    low = [s + x % s for x in range(2 * s)]
    return Partition.from_labels(2 * s, 2 * s, up + low)


def half_pairing(s: int) -> Partition:
    """The pairing in ``P(0, 2s)`` joining ``x`` to ``x + s``."""
    return Partition.from_labels(0, 2 * s, [x % s for x in range(2 * s)])
