"""Input checks shared by the estimators and the CLI.

sklearn's ``check_array`` refuses complex input, so these stay on plain numpy.
"""

from __future__ import annotations

import numbers

import numpy as np

from easywishart.partitions import Partition, parse_partition
from easywishart.tables import check_word


def check_positive_int(value, name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, numbers.Integral) or value < 1:
        raise ValueError(f"{name} must be a positive integer, got {value!r}")
    return int(value)


def check_partition(pi) -> Partition:
    if isinstance(pi, Partition):
        return pi
    if isinstance(pi, str):
        return parse_partition(pi)
    raise TypeError(f"expected a Partition or a partition literal, got {type(pi).__name__}")


def check_words(words) -> tuple[str, ...]:
    if isinstance(words, str):
        words = (words,)
    return tuple(check_word(w) for w in words)


def check_block_matrices(X, n: int) -> tuple[np.ndarray, bool]:
    """Coerce to a stack of square complex matrices of size divisible by ``n``.

    Returns the stack and whether the input was a single matrix.
    """
    X = np.asarray(X)
    if not np.issubdtype(X.dtype, np.number):
        raise TypeError(f"expected numeric input, got dtype {X.dtype}")
    single = X.ndim == 2
    if single:
        X = X[None]
    if X.ndim != 3 or X.shape[1] != X.shape[2]:
        raise ValueError(f"expected square matrices, got shape {X.shape}")
    if X.shape[1] == 0 or X.shape[1] % n:
        raise ValueError(f"matrix size {X.shape[1]} is not a positive multiple of n={n}")
    if not np.all(np.isfinite(X)):
        raise ValueError("input contains NaN or infinity")
    return X.astype(complex, copy=False), single
