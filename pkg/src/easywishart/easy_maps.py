"""Linear maps on ``M_n(C)``, their Choi matrices, and easy maps from partitions.

Index conventions
-----------------
* Choi matrix: ``choi[a*n + b, c*n + d] = phi(e_ac)[b, d]``.
* Map action: ``vec(E_ac)`` is basis vector ``a*n + c`` (row-major ``ravel``),
  so ``action[b*n + d, a*n + c] = phi(e_ac)[b, d]``.
* Block matrices: row ``(i, a)`` of a ``dn x dn`` matrix is ``i*n + a``.
* Multi-indices ``(a_1, ..., a_s)`` over ``{0..N-1}`` are read base ``N`` with
  ``a_1`` most significant, so ``C^n = (C^N)^{(x) s}`` with ``n = N**s``.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from easywishart.partitions import Partition, kernel, signature

__all__ = [
    "ChoiMatrix",
    "LinearBlockMap",
    "choi_from_map",
    "map_from_choi",
    "tensor_map",
    "twisted_tensor_map",
    "easy_choi",
    "twisted_choi",
    "easy_map",
    "BUILTIN_MAPS",
    "builtin_map",
    "apply_block_modification",
    "save_matrix",
    "load_matrix",
]

#: Largest tensor-map size (rows * columns) we agree to materialize.
MAX_TENSOR_ENTRIES = 1 << 26


def _reshuffle(matrix: np.ndarray, n: int) -> np.ndarray:
    # [a, b, c, d] -> [b, d, a, c]; an involution up to the inverse axis order
    return matrix.reshape(n, n, n, n).transpose(1, 3, 0, 2).reshape(n * n, n * n)


def _unshuffle(matrix: np.ndarray, n: int) -> np.ndarray:
    return matrix.reshape(n, n, n, n).transpose(2, 0, 3, 1).reshape(n * n, n * n)


@dataclass(frozen=True, eq=False)
class ChoiMatrix:
    """Square matrix on ``C^n (x) C^n`` attached to a map on ``M_n(C)``.

    Easy and twisted Choi matrices keep integer entries so moment sums over
    them stay exact.
    """

    entries: np.ndarray
    N: Optional[int] = None
    s: Optional[int] = None

    def __post_init__(self):
        entries = np.asarray(self.entries)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise ValueError("Choi matrix must be square")
        n = int(round(np.sqrt(entries.shape[0])))
        if n * n != entries.shape[0]:
            raise ValueError(f"Choi matrix size {entries.shape[0]} is not a perfect square")
        entries = entries.copy()
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    @property
    def n(self) -> int:
        return int(round(np.sqrt(self.entries.shape[0])))

    @property
    def is_integral(self) -> bool:
        return np.issubdtype(self.entries.dtype, np.integer)

    def tensor4(self) -> np.ndarray:
        n = self.n
        return self.entries.reshape(n, n, n, n)

    def adjoint(self) -> "ChoiMatrix":
        return ChoiMatrix(self.entries.conj().T, self.N, self.s)

    def is_self_adjoint(self, tol: float = 0.0) -> bool:
        diff = self.entries - self.entries.conj().T
        return bool(np.all(np.abs(diff) <= tol))

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.entries, dtype=dtype)

    def __eq__(self, other):
        if not isinstance(other, ChoiMatrix):
            return NotImplemented
        return self.entries.shape == other.entries.shape and bool(
            np.array_equal(self.entries, other.entries)
        )

    __hash__ = None


@dataclass(frozen=True, eq=False)
class LinearBlockMap:
    """A linear map ``M_n(C) -> M_n(C)`` given by its action on ``vec``."""

    n: int
    action: np.ndarray

    def __post_init__(self):
        action = np.asarray(self.action)
        if action.shape != (self.n * self.n, self.n * self.n):
            raise ValueError(
                f"action must be {self.n**2} x {self.n**2}, got {action.shape}"
            )
        action = action.copy()
        action.setflags(write=False)
        object.__setattr__(self, "action", action)

    @classmethod
    def from_function(cls, func: Callable[[np.ndarray], np.ndarray], n: int) -> "LinearBlockMap":
        """Tabulate ``func`` on the matrix units ``e_ac``."""
        cols = []
        for a in range(n):
            for c in range(n):
                unit = np.zeros((n, n), dtype=complex)
                unit[a, c] = 1
                cols.append(np.asarray(func(unit), dtype=complex).reshape(-1))
        return cls(n, np.stack(cols, axis=1))

    def __call__(self, A: np.ndarray) -> np.ndarray:
        A = np.asarray(A)
        if A.shape[-2:] != (self.n, self.n):
            raise ValueError(f"expected {self.n} x {self.n} blocks, got {A.shape}")
        flat = A.reshape(A.shape[:-2] + (self.n * self.n,))
        return (flat @ self.action.T).reshape(A.shape)


def choi_from_map(phi: LinearBlockMap) -> ChoiMatrix:
    return ChoiMatrix(_unshuffle(phi.action, phi.n))


def map_from_choi(choi: ChoiMatrix) -> LinearBlockMap:
    return LinearBlockMap(choi.n, _reshuffle(choi.entries, choi.n))


def _index_grid(N: int, k: int, l: int) -> np.ndarray:
    """Value table of shape ``(N**l * N**k, k + l)``: upper values then lower.

    Rows run over (lower multi-index, upper multi-index) in row-major order.
    """
    if N ** (k + l) > MAX_TENSOR_ENTRIES:
        raise ValueError(f"tensor map with N={N}, {k + l} legs is too large")
    if k + l == 0:
        return np.zeros((1, 0), dtype=np.int64)
    digits = np.indices((N,) * (l + k)).reshape(l + k, -1)
    lower, upper = digits[:l], digits[l:]
    return np.concatenate([upper, lower]).T


def _delta_mask(pi: Partition, values: np.ndarray) -> np.ndarray:
    mask = np.ones(values.shape[0], dtype=bool)
    for block in pi.blocks():
        first = values[:, block[0]]
        for pos in block[1:]:
            mask &= values[:, pos] == first
    return mask


def tensor_map(pi: Partition, N: int) -> np.ndarray:
    """Matrix of ``T_pi : (C^N)^{(x)k} -> (C^N)^{(x)l}``, shape ``(N**l, N**k)``."""
    if N < 1:
        raise ValueError("N must be positive")
    values = _index_grid(N, pi.upper, pi.lower)
    mask = _delta_mask(pi, values)
    return mask.astype(np.int64).reshape(N**pi.lower, N**pi.upper)


def twisted_tensor_map(pi: Partition, N: int) -> np.ndarray:
    """Signed version of :func:`tensor_map` weighting entries by the kernel sign."""
    if not pi.is_even:
        raise ValueError(f"twisted maps need even blocks, got {pi}")
    if N < 1:
        raise ValueError("N must be positive")
    k = pi.upper
    values = _index_grid(N, k, pi.lower)
    mask = _delta_mask(pi, values)
    out = mask.astype(np.int64)
    for row in np.flatnonzero(mask):
        vals = values[row]
        out[row] = signature(kernel(vals[:k], vals[k:]))
    return out.reshape(N**pi.lower, N**k)


def _check_square_shape(pi: Partition) -> int:
    if pi.upper != pi.lower or pi.upper % 2:
        raise ValueError(f"expected a partition in P(2s, 2s), got P({pi.upper}, {pi.lower})")
    return pi.upper // 2


def easy_map(pi: Partition, N: int, twisted: bool = False) -> LinearBlockMap:
    """The block map ``phi_pi`` (or its twist) on ``M_{N^s}(C)``.

    Its action matrix is the tensor map itself, read through
    ``e_{i_1} (x) ... (x) e_{i_2s} -> e_{(i_1..i_s), (i_{s+1}..i_2s)}``.
    """
    s = _check_square_shape(pi)
    T = twisted_tensor_map(pi, N) if twisted else tensor_map(pi, N)
    return LinearBlockMap(N**s, T)


def easy_choi(pi: Partition, N: int) -> ChoiMatrix:
    s = _check_square_shape(pi)
    return ChoiMatrix(_unshuffle(tensor_map(pi, N), N**s), N=N, s=s)


def twisted_choi(pi: Partition, N: int) -> ChoiMatrix:
    s = _check_square_shape(pi)
    return ChoiMatrix(_unshuffle(twisted_tensor_map(pi, N), N**s), N=N, s=s)


def _bessel_phase(n: int) -> np.ndarray:
    w = np.exp(2j * np.pi / n)
    return w ** np.arange(n)


BUILTIN_MAPS: dict[str, Callable[[int], Callable[[np.ndarray], np.ndarray]]] = {
    "identity": lambda n: (lambda A: A),
    "transpose": lambda n: (lambda A: A.T),
    "trace-unit": lambda n: (lambda A: np.trace(A) * np.eye(n)),
    "diagonal": lambda n: (lambda A: np.diag(np.diag(A))),
    "twisted-crossing": lambda n: (lambda A: 2 * np.diag(np.diag(A)) - A.T),
    "bessel": lambda n: (lambda A: _bessel_phase(n)[:, None] * A),
}


def builtin_map(name: str, n: int) -> LinearBlockMap:
    """Named maps: identity, transpose, trace-unit, diagonal, twisted-crossing, bessel.

    ``bessel`` multiplies on the left by ``diag(1, w, ..., w^{n-1})`` with
    ``w = exp(2 pi i / n)``.
    """
    try:
        factory = BUILTIN_MAPS[name]
    except KeyError:
        raise ValueError(
            f"unknown map {name!r}; choose from {', '.join(sorted(BUILTIN_MAPS))}"
        ) from None
    if n < 1:
        raise ValueError("n must be positive")
    phi = LinearBlockMap.from_function(factory(n), n)
    if name != "bessel":
        # every other builtin has entries in {-1, 0, 1, 2}
        phi = LinearBlockMap(n, np.rint(phi.action.real).astype(np.int64))
    return phi


def apply_block_modification(W: np.ndarray, phi: LinearBlockMap) -> np.ndarray:
    """``(id (x) phi) W``: apply ``phi`` to every ``n x n`` block.

    ``W`` may be a single ``dn x dn`` matrix or a stack of them.
    """
    W = np.asarray(W)
    n = phi.n
    size = W.shape[-1]
    if W.ndim < 2 or W.shape[-2] != size or size % n:
        raise ValueError(f"expected square matrices of size divisible by {n}, got {W.shape}")
    d = size // n
    lead = W.shape[:-2]
    blocks = W.reshape(lead + (d, n, d, n))
    blocks = np.swapaxes(blocks, -3, -2)  # (..., i, j, c, d)
    modified = phi(blocks)
    return np.swapaxes(modified, -3, -2).reshape(W.shape)


def save_matrix(path, matrix: np.ndarray, fmt: str = "csv") -> None:
    """Dump a dense complex matrix, row-major.

    ``csv``: one matrix row per line, entries as ``re,im`` pairs.
    ``bin``: raw little-endian complex128.
    """
    matrix = np.asarray(matrix, dtype=np.complex128)
    path = Path(path)
    if fmt == "csv":
        with path.open("w") as fh:
            for row in matrix:
                fh.write(",".join(f"{float(z.real)!r},{float(z.imag)!r}" for z in row) + "\n")
    elif fmt == "bin":
        matrix.astype("<c16").tofile(path)
    else:
        raise ValueError(f"unknown matrix format {fmt!r}")


def load_matrix(path, fmt: str = "csv") -> np.ndarray:
    path = Path(path)
    if fmt == "csv":
        rows = []
        for line in path.read_text().splitlines():
            if not line.strip():
                continue
            parts = [float(x) for x in line.split(",")]
            rows.append([complex(re, im) for re, im in zip(parts[::2], parts[1::2])])
        return np.array(rows, dtype=np.complex128)
    if fmt == "bin":
        flat = np.fromfile(path, dtype="<c16")
        side = int(round(np.sqrt(flat.size)))
        if side * side != flat.size:
            raise ValueError("binary dump is not a square matrix")
        return flat.reshape(side, side)
    raise ValueError(f"unknown matrix format {fmt!r}")
