"""Plain and generalized *-moments of Choi matrices and the multiplicativity test."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

import numpy as np

from easywishart.easy_maps import ChoiMatrix
from easywishart.partitions import nc_to_permutation, noncrossing_partitions
from easywishart.permutations import Permutation
from easywishart.tables import (
    AtomicMeasure,
    MomentTable,
    all_words,
    check_word,
    format_complex,
)

__all__ = [
    "DEFAULT_BUDGET",
    "trace_star_moment",
    "generalized_star_moment",
    "MultiplicativityReport",
    "is_multiplicative",
    "law_moments",
    "spectral_atoms",
]

#: Cap on the number of index tuples ``n**(2p)`` a brute-force sum may visit.
DEFAULT_BUDGET = 10**9

Number = Union[Fraction, complex]
_LETTERS = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"


def _as_matrix(X) -> np.ndarray:
    X = np.asarray(X)
    if X.ndim != 2 or X.shape[0] != X.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {X.shape}")
    return X


def trace_star_moment(X, word: str) -> complex:
    """Normalized trace of ``X^{e_1} ... X^{e_p}``; the empty word gives 1."""
    X = _as_matrix(X)
    check_word(word)
    if not word:
        return 1 + 0j
    Xs = X.conj().T
    prod = None
    for ch in word:
        factor = X if ch == "1" else Xs
        prod = factor if prod is None else prod @ factor
    return complex(np.trace(prod)) / X.shape[0]


def _as_perm(perm) -> Permutation:
    return perm if isinstance(perm, Permutation) else Permutation(tuple(perm))


def generalized_star_moment(
    choi: ChoiMatrix,
    sigma,
    tau,
    word: str,
    exact: bool = False,
    budget: int = DEFAULT_BUDGET,
) -> Number:
    """Brute-force ``(M_sigma^e (x) M_tau^e)(Lambda)``.

    Sums ``prod_x Lambda^{e_x}[i_x j_x, i_sigma(x) j_tau(x)]`` over all index
    tuples and divides by ``n**(|sigma| + |tau|)``. ``Lambda^*`` is the
    conjugate transpose. With ``exact=True`` (integer Choi matrices only) the
    sum runs in int64 and a :class:`~fractions.Fraction` is returned.
    """
    sigma, tau = _as_perm(sigma), _as_perm(tau)
    check_word(word)
    p = len(word)
    if sigma.size != p or tau.size != p:
        raise ValueError("sigma, tau and the word must have the same length")
    n = choi.n
    if n ** (2 * p) > budget:
        raise ValueError(f"n^(2p) = {n}^{2 * p} exceeds the summation budget {budget}")
    if 2 * p > len(_LETTERS):
        raise ValueError("word too long")
    norm = n ** (sigma.cycle_count + tau.cycle_count)
    if p == 0:
        return Fraction(1, norm) if exact else complex(1 / norm)

    L = choi.entries
    if exact:
        if not choi.is_integral:
            raise ValueError("exact evaluation needs an integer Choi matrix")
        L = L.astype(np.int64)
    L4 = L.reshape(n, n, n, n)
    L4s = L.conj().T.reshape(n, n, n, n)

    i_lab, j_lab = _LETTERS[:p], _LETTERS[p : 2 * p]
    operands, specs = [], []
    for x, ch in enumerate(word):
        specs.append(i_lab[x] + j_lab[x] + i_lab[sigma(x)] + j_lab[tau(x)])
        operands.append(L4 if ch == "1" else L4s)
    total = np.einsum(",".join(specs) + "->", *operands, optimize="greedy")
    if exact:
        return Fraction(int(total), norm)
    return complex(total) / norm


@dataclass
class MultiplicativityReport:
    """Outcome of checking ``(sigma, gamma) == (sigma, sigma)`` for all words."""

    p_max: int
    failures: list = field(default_factory=list)
    checked: int = 0

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "p_max": self.p_max,
            "passed": self.passed,
            "checked": self.checked,
            "failures": [
                {
                    "p": p,
                    "word": word,
                    "sigma": list(sigma),
                    "left": format_complex(left),
                    "right": format_complex(right),
                }
                for p, word, sigma, left, right in self.failures
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def summary(self) -> str:
        verdict = "pass" if self.passed else f"fail ({len(self.failures)} mismatches)"
        lines = [f"multiplicative up to p={self.p_max}: {verdict}"]
        for p, word, sigma, left, right in self.failures[:10]:
            lines.append(f"  p={p} word={word} sigma={sigma}: {left} != {right}")
        return "\n".join(lines)


def is_multiplicative(
    choi: ChoiMatrix, p_max: int = 4, tol: float = 1e-9, budget: int = DEFAULT_BUDGET
) -> MultiplicativityReport:
    """Check ``(M_sigma^e (x) M_gamma^e) = (M_sigma^e (x) M_sigma^e)`` on ``NC_p``.

    Every ``p <= p_max``, every exponent word and every noncrossing ``sigma``
    (as a permutation) is tried. Integer Choi matrices are compared exactly.
    """
    if p_max < 1:
        raise ValueError("p_max must be at least 1")
    exact = choi.is_integral
    # a self-adjoint Lambda gives the same value for every word of a given length
    hermitian = choi.is_self_adjoint(0.0 if exact else tol)
    report = MultiplicativityReport(p_max)
    for p in range(1, p_max + 1):
        gamma = Permutation.standard_cycle(p)
        for nc in noncrossing_partitions(p):
            sigma = nc_to_permutation(nc)
            cache = {}
            for word in all_words(p, include_empty=False):
                if len(word) != p:
                    continue
                key = "1" * p if hermitian else word
                if key not in cache:
                    left = generalized_star_moment(choi, sigma, gamma, key, exact, budget)
                    right = generalized_star_moment(choi, sigma, sigma, key, exact, budget)
                    cache[key] = (left, right)
                left, right = cache[key]
                report.checked += 1
                if exact:
                    ok = left == right
                else:
                    ok = abs(left - right) <= tol * max(1.0, abs(right))
                if not ok:
                    report.failures.append((p, word, sigma.image, left, right))
    return report


def law_moments(choi: ChoiMatrix, p_max: int) -> MomentTable:
    """The *-distribution of ``Lambda`` under the normalized trace."""
    X = np.asarray(choi.entries, dtype=complex)
    values = {w: trace_star_moment(X, w) for w in all_words(p_max)}
    return MomentTable(p_max, values)


def spectral_atoms(choi: ChoiMatrix, tol: float = 1e-9) -> AtomicMeasure:
    """Eigenvalue distribution of a self-adjoint ``Lambda`` as weighted atoms.

    Eigenvalues within ``tol`` of each other are merged; weights are
    multiplicities over ``n**2``.
    """
    X = np.asarray(choi.entries, dtype=complex)
    if not np.allclose(X, X.conj().T, atol=tol, rtol=0):
        raise ValueError("spectral atoms need a self-adjoint Choi matrix")
    eig = np.sort(np.linalg.eigvalsh(X))
    size = eig.size
    atoms = []
    start = 0
    for k in range(1, size + 1):
        if k == size or eig[k] - eig[k - 1] > tol:
            cluster = eig[start:k]
            loc = float(np.mean(cluster))
            if abs(loc - round(loc)) <= tol:
                loc = float(round(loc))
            atoms.append((cluster.size / size, complex(loc)))
            start = k
    return AtomicMeasure.from_pairs(atoms)
