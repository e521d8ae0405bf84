"""Structure of symmetric even partitions in ``P(2s, 2s)``.

A partition is symmetric when it is fixed by the middle symmetry, which swaps
the left and right halves of both rows. Its finest symmetric decomposition
has two kinds of components:

* a symmetric block, fixed by the middle symmetry;
* an asymmetric pair ``beta u beta°`` of two mirror-image blocks.

Each component contributes a factor ``N^(|lambda| - R|sigma| - V|tau|)`` to
the generalized moments of ``Lambda_pi``. ``lambda`` is a join of cycle
partitions of products of ``sigma``, ``tau`` and their inverses.

Lambda descriptors are tuples of product words over ``s, t, S, T``. Upper
case means inverse, and a word is composed right to left like
:class:`Permutation`. The empty tuple is the formal empty descriptor. It
leaves every one of the ``p`` indices free, so it counts as ``p`` blocks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from easywishart.easy_maps import easy_choi, twisted_choi
from easywishart.free_poisson import compound_from_choi
from easywishart.moments import DEFAULT_BUDGET, is_multiplicative, spectral_atoms
from easywishart.partitions import (
    Partition,
    adjoint,
    common_coarsening,
    half_pairing,
    is_noncrossing,
    middle_symmetry,
    orbit_partition,
    signature,
    vertical_compose,
)
from easywishart.permutations import Permutation
from easywishart.tables import AtomicMeasure, MomentTable

__all__ = [
    "EMPTY",
    "LAMBDA_TABLE",
    "is_symmetric",
    "SymmetricComponent",
    "symmetric_components",
    "is_unital_mod_scalars",
    "EligibilityReport",
    "easy_case_eligible",
    "ComponentLambda",
    "component_lambda",
    "closed_form_generalized_moment",
    "LimitPrediction",
    "predict_limit_law",
    "classification_report",
    "describe_lambda",
]

#: The formal empty descriptor.
EMPTY: tuple = ()

# keyed by (r > 0, u > 0), (v > 0, w > 0)
LAMBDA_TABLE: dict[tuple[tuple[bool, bool], tuple[bool, bool]], Optional[tuple[str, ...]]] = {
    ((True, True), (True, True)): ("ss", "st", "sT"),
    ((True, True), (True, False)): ("ss", "sT"),
    ((True, True), (False, True)): ("ss", "st"),
    ((True, True), (False, False)): ("ss",),
    ((True, False), (True, True)): ("st", "sT"),
    ((True, False), (True, False)): ("sT",),
    ((True, False), (False, True)): ("st",),
    ((True, False), (False, False)): EMPTY,
    ((False, True), (True, True)): ("ts", "tt"),
    ((False, True), (True, False)): ("ts",),
    ((False, True), (False, True)): ("Ts",),
    ((False, True), (False, False)): EMPTY,
    ((False, False), (True, True)): ("tt",),
    ((False, False), (True, False)): EMPTY,
    ((False, False), (False, True)): EMPTY,
    ((False, False), (False, False)): None,
}

_GREEK = {"s": "σ", "t": "τ", "S": "σ⁻¹", "T": "τ⁻¹"}


def describe_lambda(descriptor: tuple[str, ...]) -> str:
    if not descriptor:
        return "∅"
    out = []
    for word in descriptor:
        if len(word) == 2 and word[0] == word[1] and word[0] in "st":
            out.append(_GREEK[word[0]] + "²")
        else:
            out.append("".join(_GREEK[ch] for ch in word))
    return "∧".join(out)


def _check_square(pi: Partition) -> int:
    if pi.upper != pi.lower or pi.upper % 2:
        raise ValueError(f"expected a partition in P(2s, 2s), got P({pi.upper}, {pi.lower})")
    return pi.upper // 2


def is_symmetric(pi: Partition) -> bool:
    _check_square(pi)
    return middle_symmetry(pi) == pi


def _mirror(pos: int, s: int) -> int:
    row, x = divmod(pos, 2 * s)
    return row * 2 * s + (x + s) % (2 * s)


@dataclass(frozen=True)
class SymmetricComponent:
    """One component of the finest symmetric decomposition.

    ``counts`` is ``(r, v)`` for a symmetric block: the numbers of mirror
    pairs among its upper and lower legs. For an asymmetric pair it is
    ``(r, u, v, w)``: the legs of the leading block ``beta`` in the upper
    left, upper right, lower left and lower right quarters.
    """

    kind: str
    legs: tuple[int, ...]
    counts: tuple[int, ...]
    s: int

    @property
    def upper_legs(self) -> int:
        return sum(1 for x in self.legs if x < 2 * self.s)

    @property
    def lower_legs(self) -> int:
        return len(self.legs) - self.upper_legs

    @property
    def exponent_weights(self) -> tuple[int, int]:
        """``(R, V)``, the coefficients of ``|sigma|`` and ``|tau|``."""
        if self.kind == "symmetric-block":
            return self.counts
        r, u, v, w = self.counts
        return r + u, v + w

    def to_dict(self) -> dict:
        return {"kind": self.kind, "legs": list(self.legs), "counts": list(self.counts)}


def symmetric_components(pi: Partition) -> list[SymmetricComponent]:
    s = _check_square(pi)
    if middle_symmetry(pi) != pi:
        raise ValueError(f"{pi} is not symmetric")
    blocks = pi.blocks()
    block_of = {x: b for b, block in enumerate(blocks) for x in block}
    seen: set[int] = set()
    out = []
    for b, block in enumerate(blocks):
        if b in seen:
            continue
        mirrored = {_mirror(x, s) for x in block}
        partner = block_of[next(iter(mirrored))]
        seen.update({b, partner})
        if partner == b:
            up = sum(1 for x in block if x < 2 * s)
            low = len(block) - up
            out.append(SymmetricComponent("symmetric-block", block, (up // 2, low // 2), s))
            continue
        # blocks() lists blocks by first leg, so ``block`` leads the pair
        legs = tuple(sorted(block + blocks[partner]))
        quarters = [0, 0, 0, 0]
        for x in block:
            row, col = divmod(x, 2 * s)
            quarters[2 * row + (col >= s)] += 1
        out.append(SymmetricComponent("asymmetric-pair", legs, tuple(quarters), s))
    return out


def _phi_of_one(pi: Partition, N: int) -> np.ndarray:
    L4 = easy_choi(pi, N).tensor4()
    return np.einsum("abad->bd", L4)


def is_unital_mod_scalars(pi: Partition, N: int = 2) -> tuple[bool, Optional[int]]:
    """Whether ``phi_pi(1)`` is a multiple of the identity, and the multiple.

    Both the matrix evaluation and the gluing criterion (half pairing put on
    top of ``pi`` gives back the half pairing) are computed; a disagreement
    raises.
    """
    s = _check_square(pi)
    if N < 2:
        raise ValueError("the matrix criterion needs N >= 2")
    image = _phi_of_one(pi, N)
    c = int(image[0, 0])
    by_matrix = bool(np.array_equal(image, c * np.eye(image.shape[0], dtype=image.dtype)))
    mu = half_pairing(s)
    by_gluing = vertical_compose(mu, pi)[0] == mu
    if by_matrix != by_gluing:
        raise RuntimeError(
            f"unitality criteria disagree on {pi}: matrix={by_matrix}, gluing={by_gluing}"
        )
    return by_matrix, (c if by_matrix else None)


_BASIC_SYMMETRIC = {(1, 1), (1, 0), (0, 1)}
_BASIC_PAIR = {(1, 0, 1, 0), (1, 0, 0, 1)}


@dataclass
class EligibilityReport:
    unital: bool
    adjoint_unital: bool
    small_components: bool
    basic_components: bool
    components: list = field(default_factory=list)

    @property
    def by_unitality(self) -> bool:
        return self.unital and self.adjoint_unital

    @property
    def eligible(self) -> bool:
        return self.by_unitality

    @property
    def consistent(self) -> bool:
        return self.by_unitality == self.small_components == self.basic_components

    def to_dict(self) -> dict:
        return {
            "eligible": self.eligible,
            "unital": self.unital,
            "adjoint_unital": self.adjoint_unital,
            "small_components": self.small_components,
            "basic_components": self.basic_components,
        }


def easy_case_eligible(pi: Partition, N: int = 2) -> tuple[bool, EligibilityReport]:
    """Three equivalent tests for a symmetric even ``pi``.

    1. ``phi_pi`` and ``phi_{pi*}`` are both unital modulo scalars.
    2. Every component has at most two upper and two lower legs.
    3. Every component is a copy of one of the four even ``P(2, 2)`` shapes.

    Raises if they disagree.
    """
    if not pi.is_even:
        raise ValueError(f"{pi} has odd blocks")
    comps = symmetric_components(pi)
    unital = is_unital_mod_scalars(pi, N)[0]
    adj_unital = is_unital_mod_scalars(adjoint(pi), N)[0]
    small = all(c.upper_legs <= 2 and c.lower_legs <= 2 for c in comps)
    basic = all(
        c.counts in (_BASIC_SYMMETRIC if c.kind == "symmetric-block" else _BASIC_PAIR)
        for c in comps
    )
    report = EligibilityReport(unital, adj_unital, small, basic, comps)
    if not report.consistent:
        raise RuntimeError(f"eligibility conditions disagree on {pi}: {report.to_dict()}")
    return report.eligible, report


_FACTORS = {"s": lambda s, t: s, "t": lambda s, t: t,
            "S": lambda s, t: s.inverse(), "T": lambda s, t: t.inverse()}


def _evaluate_word(word: str, sigma: Permutation, tau: Permutation) -> Permutation:
    out = Permutation.identity(sigma.size)
    for ch in word:
        out = out * _FACTORS[ch](sigma, tau)
    return out


@dataclass(frozen=True)
class ComponentLambda:
    descriptor: tuple[str, ...]
    partition: Optional[Partition]
    blocks: int
    R: int
    V: int

    @property
    def exponent_data(self) -> tuple[int, int, int]:
        return self.blocks, self.R, self.V

    def exponent(self, sigma: Permutation, tau: Permutation) -> int:
        return self.blocks - self.R * sigma.cycle_count - self.V * tau.cycle_count


def _lambda_descriptor(comp: SymmetricComponent) -> tuple[str, ...]:
    if comp.kind == "symmetric-block":
        r, v = comp.counts
        if r and v:
            return ("s", "t")
        if r:
            return ("s",)
        if v:
            return ("t",)
        raise ValueError("symmetric block without legs")
    r, u, v, w = comp.counts
    desc = LAMBDA_TABLE[(r > 0, u > 0), (v > 0, w > 0)]
    if desc is None:
        raise ValueError("asymmetric pair without legs")
    return desc


def component_lambda(comp: SymmetricComponent, sigma, tau) -> ComponentLambda:
    """The partition ``lambda`` of one component and its exponent data."""
    sigma = sigma if isinstance(sigma, Permutation) else Permutation(tuple(sigma))
    tau = tau if isinstance(tau, Permutation) else Permutation(tuple(tau))
    if sigma.size != tau.size:
        raise ValueError("sigma and tau must have the same size")
    desc = _lambda_descriptor(comp)
    R, V = comp.exponent_weights
    if not desc:
        return ComponentLambda(desc, None, sigma.size, R, V)
    parts = [orbit_partition(_evaluate_word(w, sigma, tau)) for w in desc]
    lam = parts[0]
    for other in parts[1:]:
        lam = common_coarsening(lam, other)
    return ComponentLambda(desc, lam, lam.n_blocks, R, V)


def closed_form_generalized_moment(pi: Partition, sigma, tau, N: int) -> Fraction:
    """Plain generalized moment of ``Lambda_pi`` as a product over components."""
    sigma = sigma if isinstance(sigma, Permutation) else Permutation(tuple(sigma))
    tau = tau if isinstance(tau, Permutation) else Permutation(tuple(tau))
    exponent = sum(
        component_lambda(c, sigma, tau).exponent(sigma, tau) for c in symmetric_components(pi)
    )
    return Fraction(N) ** exponent


@dataclass
class LimitPrediction:
    """Limit *-moments of ``m W~`` and, when available, the base measure ``mn rho``.

    For twisted predictions ``matches_untwisted`` records whether the signed
    Choi matrix gives the same table as the plain one.
    """

    moments: MomentTable
    base_measure: Optional[AtomicMeasure]
    n: int
    m: int
    matches_untwisted: Optional[bool] = None

    @property
    def moments_of_w_tilde(self) -> MomentTable:
        return self.moments.scaled(1 / self.m)


def predict_limit_law(
    pi: Partition,
    N: int,
    m: int,
    twisted: bool = False,
    p_max: int = 4,
    budget: int = DEFAULT_BUDGET,
) -> LimitPrediction:
    """Compound free Poisson limit for an eligible ``pi``.

    With ``twisted=True`` the prediction comes from the twisted Choi matrix,
    which must pass the multiplicativity check, and is compared with the
    untwisted one. The two differ whenever a row carries crossing horizontal
    strings that are not matched on the other row, e.g. ``abab/cdcd``.
    """
    eligible, report = easy_case_eligible(pi, max(N, 2))
    if not is_symmetric(pi) or not eligible:
        raise ValueError(f"{pi} is not in the easy case: {report.to_dict()}")
    choi = easy_choi(pi, N)
    table = compound_from_choi(choi, m, p_max=p_max, budget=budget)
    if not twisted:
        base = spectral_atoms(choi).scaled(m * choi.n) if choi.is_self_adjoint() else None
        return LimitPrediction(table, base, choi.n, m)
    tw = twisted_choi(pi, N)
    check = is_multiplicative(tw, p_max, budget=budget)
    if not check.passed:
        raise ValueError(f"twisted Choi matrix of {pi} is not multiplicative:\n{check.summary()}")
    tw_table = compound_from_choi(tw, m, p_max=p_max, budget=budget)
    base = spectral_atoms(tw).scaled(m * tw.n) if tw.is_self_adjoint() else None
    return LimitPrediction(tw_table, base, tw.n, m, tw_table.allclose(table, 1e-9))


def classification_report(pi: Partition, N: int = 2) -> dict:
    """Flags, components and eligibility of a partition, as plain data."""
    out = {
        "partition": str(pi),
        "even": pi.is_even,
        "noncrossing": is_noncrossing(pi),
        "signature": signature(pi) if pi.is_even else None,
    }
    square = pi.upper == pi.lower and pi.upper % 2 == 0 and pi.upper > 0
    out["symmetric"] = is_symmetric(pi) if square else None
    if out["symmetric"]:
        out["components"] = [c.to_dict() for c in symmetric_components(pi)]
        if pi.is_even:
            out["eligibility"] = easy_case_eligible(pi, N)[1].to_dict()
    return out
