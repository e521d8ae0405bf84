"""Compound free Poisson laws and the exact large-d limits of block-modified Wishart moments.

Normalizations: :func:`asymptotic_limit` and :func:`compound_from_choi` give
moments of ``m * W~``; :func:`bessel_limit` gives moments of ``W~`` itself.
Use ``MomentTable.scaled(1 / m)`` to move between the two.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction
from math import prod

from easywishart.easy_maps import ChoiMatrix
from easywishart.moments import DEFAULT_BUDGET, generalized_star_moment
from easywishart.partitions import nc_to_permutation, noncrossing_partitions
from easywishart.permutations import Permutation
from easywishart.tables import AtomicMeasure, MomentTable, all_words, check_word, word_signs

__all__ = [
    "measure_star_moment",
    "CompoundFreePoissonLaw",
    "compound_moments",
    "compound_from_choi",
    "asymptotic_limit",
    "free_bessel",
    "bessel_limit",
    "marchenko_pastur",
    "roots_of_unity",
]


def measure_star_moment(mu: AtomicMeasure, word: str) -> complex:
    """``sum_i c_i prod_x z_i^{e_x}`` with ``z^* = conj(z)``."""
    ones = check_word(word).count("1")
    stars = len(word) - ones
    return sum(c * z**ones * z.conjugate() ** stars for c, z in mu.atoms)


@dataclass(frozen=True)
class CompoundFreePoissonLaw:
    """The law ``pi_mu`` whose free cumulants are the *-moments of ``mu``."""

    base: AtomicMeasure

    def __post_init__(self):
        if self.base.mass <= 0:
            raise ValueError("base measure must have positive mass")

    def moments(self, p_max: int) -> MomentTable:
        return compound_moments(self, p_max)


def _subword(word: str, block) -> str:
    return "".join(word[x] for x in sorted(block))


def compound_moments(law: CompoundFreePoissonLaw, p_max: int) -> MomentTable:
    """Moment-cumulant sum over ``NC_p`` with cumulants read off the base measure."""
    if p_max < 0:
        raise ValueError("p_max must be nonnegative")
    cumulant_cache: dict[str, complex] = {}

    def cumulant(sub: str) -> complex:
        if sub not in cumulant_cache:
            cumulant_cache[sub] = measure_star_moment(law.base, sub)
        return cumulant_cache[sub]

    values = {}
    for word in all_words(p_max, include_empty=False):
        values[word] = sum(
            prod(cumulant(_subword(word, b)) for b in nc.blocks())
            for nc in noncrossing_partitions(len(word))
        )
    return MomentTable(p_max, values)


def _choi_sum(choi: ChoiMatrix, m, n, p_max: int, second: str, budget: int) -> MomentTable:
    if n is not None and n != choi.n:
        raise ValueError(f"n={n} does not match the Choi matrix (n={choi.n})")
    if m <= 0:
        raise ValueError("m must be positive")
    n = choi.n
    exact = choi.is_integral and isinstance(m, int)
    hermitian = choi.is_self_adjoint(0.0 if exact else 1e-12)
    values = {}
    for p in range(1, p_max + 1):
        gamma = Permutation.standard_cycle(p)
        plain = None
        for word in all_words(p, include_empty=False):
            if len(word) != p:
                continue
            if hermitian and plain is not None:
                values[word] = plain
                continue
            total = Fraction(0) if exact else 0j
            for nc in noncrossing_partitions(p):
                sigma = nc_to_permutation(nc)
                tau = gamma if second == "gamma" else sigma
                g = generalized_star_moment(choi, sigma, tau, word, exact, budget)
                total += (m * n) ** nc.n_blocks * g
            values[word] = complex(total)
            if plain is None:
                plain = values[word]
    return MomentTable(p_max, values)


def compound_from_choi(
    choi: ChoiMatrix, m, n=None, p_max: int = 4, budget: int = DEFAULT_BUDGET
) -> MomentTable:
    """``sum_{sigma in NC_p} (mn)^|sigma| (M_sigma^e (x) M_sigma^e)(Lambda)``.

    These are the moments of ``pi_{mn rho}``, the limit law of ``m W~`` when
    ``Lambda`` is multiplicative.
    """
    return _choi_sum(choi, m, n, p_max, "sigma", budget)


def asymptotic_limit(
    choi: ChoiMatrix, m, n=None, p_max: int = 4, budget: int = DEFAULT_BUDGET
) -> MomentTable:
    """Exact ``d -> infinity`` limit of the *-moments of ``m W~``, for any ``Lambda``.

    ``sum_{sigma in NC_p} (mn)^|sigma| (M_sigma^e (x) M_gamma^e)(Lambda)``.
    """
    return _choi_sum(choi, m, n, p_max, "gamma", budget)


def roots_of_unity(n: int) -> list[complex]:
    out = []
    for k in range(n):
        z = cmath.exp(2j * cmath.pi * k / n)
        # snap the floating noise so that e.g. -1 is exactly -1
        re = 0.0 if abs(z.real) < 1e-15 else z.real
        im = 0.0 if abs(z.imag) < 1e-15 else z.imag
        out.append(complex(re, im))
    return out


def free_bessel(n: int, t: float) -> CompoundFreePoissonLaw:
    """``beta^n_t = pi_{t eta_n}`` with ``eta_n`` uniform on the ``n``-th roots of unity."""
    if n < 1:
        raise ValueError("n must be positive")
    if t <= 0:
        raise ValueError("t must be positive")
    return CompoundFreePoissonLaw(
        AtomicMeasure(tuple((t / n, z) for z in roots_of_unity(n)))
    )


def marchenko_pastur(t: float) -> CompoundFreePoissonLaw:
    """Free Poisson law ``pi_t``."""
    if t <= 0:
        raise ValueError("t must be positive")
    return CompoundFreePoissonLaw(AtomicMeasure(((t, 1 + 0j),)))


def bessel_limit(n: int, m: int, word: str) -> Fraction:
    """Enumerative limit of the *-moments of ``W~`` for the map ``A -> EA``.

    Sums ``(n/m)^(|tau| - 1)`` over noncrossing ``tau`` whose blocks all have
    signed size ``sum e_x`` (``1 -> +1``, ``* -> -1``) divisible by ``n``.
    """
    if n < 1 or m < 1:
        raise ValueError("n and m must be positive")
    signs = word_signs(word)
    if not signs:
        return Fraction(1)
    ratio = Fraction(n, m)
    total = Fraction(0)
    for nc in noncrossing_partitions(len(signs)):
        if all(sum(signs[x] for x in b) % n == 0 for b in nc.blocks()):
            total += ratio ** (nc.n_blocks - 1)
    return total
