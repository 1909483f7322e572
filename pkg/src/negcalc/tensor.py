"""Kronecker and vectorization algebra on column-stacked matrices.

The vec layout is column-major throughout the package: entry ``(i, j)`` of an
``m x n`` matrix lands at position ``j*m + i`` (0-based).  The commutation
matrix ``K`` and the partial commutation matrix ``K_B`` are stored as index
permutations; ``dense()`` materializes them when a test needs the matrix.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .errors import DimensionError


class BipartiteDims(NamedTuple):
    d_a: int
    d_b: int

    @property
    def total(self) -> int:
        return self.d_a * self.d_b

    def check(self, n: int) -> None:
        if self.d_a < 1 or self.d_b < 1:
            raise DimensionError(f"subsystem dimensions must be >= 1, got {tuple(self)}")
        if self.d_a * self.d_b != n:
            raise DimensionError(f"dims {tuple(self)} do not match side length {n}")


def as_dims(dims) -> BipartiteDims:
    return dims if isinstance(dims, BipartiteDims) else BipartiteDims(*(int(d) for d in dims))


def vec(m: np.ndarray) -> np.ndarray:
    """Stack the columns of ``m`` into a 1-D array."""
    m = np.asarray(m)
    if m.ndim != 2:
        raise DimensionError(f"vec expects a matrix, got shape {m.shape}")
    return m.reshape(-1, order="F")


def unvec(v: np.ndarray, rows: int, cols: int) -> np.ndarray:
    v = np.asarray(v)
    if v.ndim != 1 or v.size != rows * cols:
        raise DimensionError(f"cannot unvec length {v.size} into {rows}x{cols}")
    return v.reshape((rows, cols), order="F")


def single_entry(n: int, i: int, j: int) -> np.ndarray:
    """Single-entry matrix ``J^{ij}_n``; ``i`` and ``j`` are 1-based."""
    if not (1 <= i <= n and 1 <= j <= n):
        raise IndexError(f"single_entry indices ({i}, {j}) out of range for n={n}")
    out = np.zeros((n, n))
    out[i - 1, j - 1] = 1.0
    return out


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.kron(a, b)


def kron_sum(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """``a (x) 1_m + 1_n (x) b`` for square ``a`` (n x n) and ``b`` (m x m)."""
    a = np.asarray(a)
    b = np.asarray(b)
    for name, m in (("A", a), ("B", b)):
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionError(f"kron_sum needs square matrices, {name} has shape {m.shape}")
    return np.kron(a, np.eye(b.shape[0])) + np.kron(np.eye(a.shape[0]), b)


@dataclass(frozen=True, eq=False)
class SuperopMatrix:
    """Permutation matrix acting on vectorized operators.

    ``perm`` is a gather map: ``(S @ v)[q] == v[perm[q]]``.
    """

    perm: np.ndarray

    # make ``ndarray @ SuperopMatrix`` dispatch to __rmatmul__
    __array_ufunc__ = None

    def __post_init__(self):
        perm = np.asarray(self.perm, dtype=np.intp)
        if perm.ndim != 1 or not np.array_equal(np.sort(perm), np.arange(perm.size)):
            raise ValueError("perm is not a bijection")
        perm.setflags(write=False)
        object.__setattr__(self, "perm", perm)

    @property
    def dim(self) -> int:
        return self.perm.size

    @property
    def shape(self) -> tuple[int, int]:
        return (self.dim, self.dim)

    def apply(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v)
        if v.shape[0] != self.dim:
            raise DimensionError(f"operand has leading size {v.shape[0]}, expected {self.dim}")
        return v[self.perm]

    def apply_left(self, row: np.ndarray) -> np.ndarray:
        """Row vector times this matrix."""
        row = np.asarray(row)
        out = np.empty_like(row)
        out[..., self.perm] = row
        return out

    def __matmul__(self, other):
        if isinstance(other, SuperopMatrix):
            return SuperopMatrix(other.perm[self.perm])
        return self.apply(other)

    def __rmatmul__(self, other):
        other = np.asarray(other)
        if other.ndim == 1:
            return self.apply_left(other)
        out = np.empty_like(other)
        out[:, self.perm] = other
        return out

    @property
    def T(self) -> "SuperopMatrix":
        inv = np.empty_like(self.perm)
        inv[self.perm] = np.arange(self.dim)
        return SuperopMatrix(inv)

    def dense(self) -> np.ndarray:
        out = np.zeros(self.shape)
        out[np.arange(self.dim), self.perm] = 1.0
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, SuperopMatrix) and np.array_equal(self.perm, other.perm)

    def __hash__(self) -> int:
        return hash(self.perm.tobytes())


@lru_cache(maxsize=None)
def commutation_matrix(m: int, n: int | None = None) -> SuperopMatrix:
    """``K_{mn}`` with ``K_{mn} vec(X) = vec(X^T)`` for every ``m x n`` matrix ``X``."""
    n = m if n is None else n
    if m < 1 or n < 1:
        raise DimensionError("commutation matrix needs m, n >= 1")
    # X^T[j, i] sits at i*n + j and comes from X[i, j] at j*m + i
    i, j = np.meshgrid(np.arange(m), np.arange(n), indexing="ij")
    perm = np.empty(m * n, dtype=np.intp)
    perm[(i * n + j).ravel()] = (j * m + i).ravel()
    return SuperopMatrix(perm)


def partial_transpose(rho: np.ndarray, dims) -> np.ndarray:
    """Transpose every ``d_B x d_B`` block of ``rho`` in place (``T_B``)."""
    rho = np.asarray(rho)
    dims = as_dims(dims)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise DimensionError(f"partial_transpose needs a square matrix, got {rho.shape}")
    dims.check(rho.shape[0])
    d_a, d_b = dims
    out = np.empty_like(rho)
    for a_i in range(d_a):
        rows = slice(a_i * d_b, (a_i + 1) * d_b)
        for a_j in range(d_a):
            cols = slice(a_j * d_b, (a_j + 1) * d_b)
            out[rows, cols] = rho[rows, cols].T
    return out


def partial_commutation_matrix(dims) -> SuperopMatrix:
    """``K_B`` with ``vec(rho^{T_B}) = K_B vec(rho)``.

    Built from the action of ``T_B`` on the standard basis: entry ``(i, j)``
    with ``i = a_i d_B + b_i`` and ``j = a_j d_B + b_j`` moves to
    ``(a_i d_B + b_j, a_j d_B + b_i)``.
    """
    return _partial_commutation_matrix(*as_dims(dims))


@lru_cache(maxsize=None)
def _partial_commutation_matrix(d_a: int, d_b: int) -> SuperopMatrix:
    n = d_a * d_b
    a_i, b_i, a_j, b_j = np.meshgrid(
        np.arange(d_a), np.arange(d_b), np.arange(d_a), np.arange(d_b), indexing="ij"
    )
    src = (a_j * d_b + b_j) * n + (a_i * d_b + b_i)
    dst = (a_j * d_b + b_i) * n + (a_i * d_b + b_j)
    perm = np.empty(n * n, dtype=np.intp)
    perm[dst.ravel()] = src.ravel()
    return SuperopMatrix(perm)


@dataclass(frozen=True, eq=False)
class EigenbasisForm:
    """``K_B = V diag(signs) V^T`` with the +1 (symmetric) block first."""

    V: np.ndarray
    signs: np.ndarray
    k: int
    l: int

    def reconstruct(self) -> np.ndarray:
        return (self.V * self.signs) @ self.V.T


def _symmetric_antisymmetric_basis(d: int) -> tuple[list[np.ndarray], list[np.ndarray]]:
    sym, anti = [], []
    for i in range(d):
        for j in range(i, d):
            e = np.zeros((d, d))
            if i == j:
                e[i, i] = 1.0
            else:
                e[i, j] = e[j, i] = 1.0 / np.sqrt(2.0)
                o = np.zeros((d, d))
                o[i, j], o[j, i] = 1.0 / np.sqrt(2.0), -1.0 / np.sqrt(2.0)
                anti.append(o)
            sym.append(e)
    return sym, anti


def partial_commutation_eigenbasis(dims) -> EigenbasisForm:
    """Diagonalize ``K_B`` in the basis ``{J^{ab}_{d_A}} (x) (sym u antisym)``.

    ``X (x) E`` is a +1 eigenvector of partial transposition for symmetric
    ``E`` and ``X (x) O`` a -1 eigenvector for antisymmetric ``O``.
    """
    return _partial_commutation_eigenbasis(*as_dims(dims))


@lru_cache(maxsize=None)
def _partial_commutation_eigenbasis(d_a: int, d_b: int) -> EigenbasisForm:
    sym, anti = _symmetric_antisymmetric_basis(d_b)
    units = [single_entry(d_a, a + 1, b + 1) for b in range(d_a) for a in range(d_a)]
    columns = [vec(np.kron(x, e)) for e in sym for x in units]
    columns += [vec(np.kron(x, o)) for o in anti for x in units]
    k = len(sym) * d_a * d_a
    l = len(anti) * d_a * d_a
    signs = np.concatenate([np.ones(k), -np.ones(l)])
    V = np.column_stack(columns)
    V.setflags(write=False)
    signs.setflags(write=False)
    return EigenbasisForm(V=V, signs=signs, k=k, l=l)
