"""scikit-learn style front ends.

``BlockModifier`` transforms Wishart samples, ``StarMomentTransformer`` turns
matrices into *-moment features, and ``LimitLawPredictor`` predicts limit
moments for exponent words.
"""

from __future__ import annotations

from typing import Optional

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from easywishart._validation import (
    check_block_matrices,
    check_partition,
    check_positive_int,
    check_words,
)
from easywishart.classify import easy_case_eligible, is_symmetric
from easywishart.easy_maps import (
    ChoiMatrix,
    LinearBlockMap,
    apply_block_modification,
    builtin_map,
    choi_from_map,
    easy_choi,
    easy_map,
    twisted_choi,
)
from easywishart.free_poisson import asymptotic_limit, compound_from_choi
from easywishart.moments import is_multiplicative, spectral_atoms
from easywishart.partitions import Partition
from easywishart.tables import all_words
from easywishart.wishart import word_traces

__all__ = [
    "build_block_map",
    "BlockModifier",
    "StarMomentTransformer",
    "LimitLawPredictor",
]


def build_block_map(
    partition=None, map_name: Optional[str] = None, N: int = 2, n: Optional[int] = None,
    twisted: bool = False,
) -> tuple[LinearBlockMap, ChoiMatrix, Optional[Partition]]:
    """Resolve a partition or a builtin map name into a map and its Choi matrix."""
    if (partition is None) == (map_name is None):
        raise ValueError("give exactly one of a partition or a builtin map name")
    if partition is not None:
        pi = check_partition(partition)
        N = check_positive_int(N, "N")
        phi = easy_map(pi, N, twisted=twisted)
        choi = twisted_choi(pi, N) if twisted else easy_choi(pi, N)
        return phi, choi, pi
    if twisted:
        raise ValueError("twisting applies to partition maps only")
    if n is None:
        raise ValueError("a builtin map needs the block size n")
    phi = builtin_map(map_name, check_positive_int(n, "n"))
    return phi, choi_from_map(phi), None


class BlockModifier(TransformerMixin, BaseEstimator):
    """Apply ``id (x) phi`` to every ``n x n`` block of the input matrices.

    Parameters
    ----------
    partition : str or Partition, optional
        Source of an easy map on ``M_{N^s}``.
    map : str, optional
        Builtin map name; needs ``n``.
    N : int
        Base dimension for partition maps.
    n : int, optional
        Block size for builtin maps.
    twisted : bool
        Use the signed version of the partition map.
    """

    def __init__(self, partition=None, map=None, N=2, n=None, twisted=False):
        self.partition = partition
        self.map = map
        self.N = N
        self.n = n
        self.twisted = twisted

    def fit(self, X=None, y=None):
        self.block_map_, self.choi_, self.partition_ = build_block_map(
            self.partition, self.map, self.N, self.n, self.twisted
        )
        self.n_ = self.block_map_.n
        if X is not None:
            check_block_matrices(X, self.n_)
        return self

    def transform(self, X):
        check_is_fitted(self, "block_map_")
        stack, single = check_block_matrices(X, self.n_)
        out = apply_block_modification(stack, self.block_map_)
        return out[0] if single else out


class StarMomentTransformer(TransformerMixin, BaseEstimator):
    """Normalized traces of exponent words, one feature column per word.

    ``fit`` also records the sample mean and standard error of each feature.
    """

    def __init__(self, words=None, p_max=4, rescale=1.0):
        self.words = words
        self.p_max = p_max
        self.rescale = rescale

    def _resolve_words(self):
        if self.words is None:
            return tuple(all_words(check_positive_int(self.p_max, "p_max"), include_empty=False))
        return check_words(self.words)

    def fit(self, X, y=None):
        self.words_ = self._resolve_words()
        features = self._features(X)
        self.mean_ = features.mean(axis=0)
        if features.shape[0] > 1:
            sd = np.maximum(features.real.std(axis=0, ddof=1), features.imag.std(axis=0, ddof=1))
            self.standard_error_ = sd / np.sqrt(features.shape[0])
        else:
            self.standard_error_ = np.zeros(len(self.words_))
        self.n_samples_ = features.shape[0]
        return self

    def _features(self, X) -> np.ndarray:
        stack, _ = check_block_matrices(X, 1)
        return np.stack([word_traces(self.rescale * M, self.words_) for M in stack])

    def transform(self, X):
        check_is_fitted(self, "words_")
        return self._features(X)

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "words_")
        return np.array([f"tr[{w}]" for w in self.words_], dtype=object)


class LimitLawPredictor(BaseEstimator):
    """Exact ``d -> infinity`` moments for a block modification.

    After ``fit``:

    * ``limit_`` holds the moments of ``m W~`` for any map;
    * ``compound_`` holds the compound free Poisson moments when the Choi
      matrix passes the multiplicativity check up to ``p_max``;
    * ``base_measure_`` holds ``mn rho`` when the Choi matrix is self-adjoint;
    * ``eligible_`` tells whether a partition is in the easy case.

    ``predict`` reads exponent words off ``limit_``. Pass ``scale="w"`` to
    get moments of ``W~`` instead of ``m W~``.
    """

    def __init__(self, partition=None, map=None, N=2, n=None, m=1, p_max=4, twisted=False):
        self.partition = partition
        self.map = map
        self.N = N
        self.n = n
        self.m = m
        self.p_max = p_max
        self.twisted = twisted

    def fit(self, X=None, y=None):
        m = check_positive_int(self.m, "m")
        p_max = check_positive_int(self.p_max, "p_max")
        _, choi, pi = build_block_map(self.partition, self.map, self.N, self.n, self.twisted)
        self.choi_ = choi
        self.limit_ = asymptotic_limit(choi, m, p_max=p_max)
        self.multiplicativity_ = is_multiplicative(choi, p_max)
        self.compound_ = (
            compound_from_choi(choi, m, p_max=p_max) if self.multiplicativity_.passed else None
        )
        self.base_measure_ = (
            spectral_atoms(choi).scaled(m * choi.n) if choi.is_self_adjoint(1e-12) else None
        )
        self.eligible_ = None
        if pi is not None and pi.is_even and pi.upper == pi.lower and pi.upper % 2 == 0:
            self.eligible_ = is_symmetric(pi) and easy_case_eligible(pi, max(self.N, 2))[0]
        return self

    def predict(self, words, scale: str = "mw"):
        check_is_fitted(self, "limit_")
        if scale not in ("mw", "w"):
            raise ValueError("scale must be 'mw' or 'w'")
        table = self.limit_ if scale == "mw" else self.limit_.scaled(1 / self.m)
        words = check_words(words)
        too_long = [w for w in words if len(w) > table.order]
        if too_long:
            raise ValueError(f"words longer than p_max={table.order}: {too_long}")
        return np.array([table[w] for w in words], dtype=complex)
