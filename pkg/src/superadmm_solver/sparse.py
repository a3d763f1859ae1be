"""Compressed sparse column matrices and the low-level kernels built on them.

All matrices in the solver are CSC with int64 index arrays and float64
values, canonical form: column pointers non-decreasing, row indices
strictly increasing within each column, no duplicates.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit


class MalformedSparse(ValueError):
    """CSC arrays are structurally inconsistent."""


@dataclass
class SparseMatrix:
    """CSC matrix: ``colptr`` (ncols+1), ``rowidx`` / ``values`` (nnz)."""

    nrows: int
    ncols: int
    colptr: np.ndarray
    rowidx: np.ndarray
    values: np.ndarray

    @property
    def nnz(self) -> int:
        return int(self.colptr[self.ncols])

    def copy(self) -> "SparseMatrix":
        return SparseMatrix(self.nrows, self.ncols, self.colptr.copy(),
                            self.rowidx.copy(), self.values.copy())

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.nrows, self.ncols))
        for j in range(self.ncols):
            for p in range(self.colptr[j], self.colptr[j + 1]):
                out[self.rowidx[p], j] = self.values[p]
        return out


def infinity_norm(v: np.ndarray) -> float:
    """Max-absolute-value norm; 0 for an empty vector."""
    v = np.asarray(v, dtype=np.float64)
    if v.size == 0:
        return 0.0
    return float(np.max(np.abs(v)))


def _as_index_array(a) -> np.ndarray:
    arr = np.asarray(a)
    if arr.size and not np.issubdtype(arr.dtype, np.integer):
        raise MalformedSparse("index arrays must be integer typed")
    return arr.astype(np.int64, copy=True)


def csc_canonical(nrows: int, ncols: int, colptr, rowidx, values) -> SparseMatrix:
    """Validate raw CSC arrays, sort row indices per column, sum duplicates.

    Raises MalformedSparse on structural problems (value checks such as
    NaN screening belong to the caller).
    """
    colptr = _as_index_array(colptr)
    rowidx = _as_index_array(rowidx)
    values = np.asarray(values, dtype=np.float64).copy()

    if nrows < 0 or ncols < 0:
        raise MalformedSparse("negative matrix dimension")
    if colptr.shape != (ncols + 1,):
        raise MalformedSparse(
            f"colptr has length {colptr.size}, expected ncols+1 = {ncols + 1}")
    if colptr[0] != 0:
        raise MalformedSparse("colptr[0] must be 0")
    if np.any(np.diff(colptr) < 0):
        raise MalformedSparse("colptr must be non-decreasing")
    nnz = int(colptr[-1])
    if rowidx.shape != (nnz,) or values.shape != (nnz,):
        raise MalformedSparse(
            f"rowidx/values have lengths {rowidx.size}/{values.size}, "
            f"expected colptr[ncols] = {nnz}")
    if nnz and (rowidx.min() < 0 or rowidx.max() >= nrows):
        raise MalformedSparse("row index out of range")

    cols = np.repeat(np.arange(ncols, dtype=np.int64), np.diff(colptr))
    # Stable sort by (col, row); within-column order becomes ascending.
    order = np.lexsort((rowidx, cols))
    rowidx = rowidx[order]
    values = values[order]

    if nnz:
        dup = np.flatnonzero((np.diff(cols[order]) == 0) & (np.diff(rowidx) == 0))
        if dup.size:
            keep = np.ones(nnz, dtype=bool)
            keep[dup + 1] = False
            starts = np.flatnonzero(keep)
            values = np.add.reduceat(values, starts)
            rowidx = rowidx[starts]
            counts = np.bincount(cols[order][starts], minlength=ncols)
            colptr = np.concatenate(([0], np.cumsum(counts))).astype(np.int64)

    return SparseMatrix(nrows, ncols, colptr, rowidx, values)


def csc_from_triplets(nrows: int, ncols: int, rows, cols, vals) -> SparseMatrix:
    """Build a canonical CSC matrix from COO triplets, summing duplicates."""
    rows = np.asarray(rows, dtype=np.int64)
    cols = np.asarray(cols, dtype=np.int64)
    vals = np.asarray(vals, dtype=np.float64)
    if not (rows.shape == cols.shape == vals.shape):
        raise MalformedSparse("triplet arrays must have equal length")
    counts = np.bincount(cols, minlength=ncols) if rows.size else np.zeros(ncols, dtype=np.int64)
    colptr = np.concatenate(([0], np.cumsum(counts))).astype(np.int64)
    order = np.lexsort((rows, cols))
    m = SparseMatrix(nrows, ncols, colptr, rows[order].copy(), vals[order].copy())
    # Reuse the canonicalizer for duplicate folding and range checks.
    return csc_canonical(nrows, ncols, m.colptr, m.rowidx, m.values)


def csc_from_dense(mat) -> SparseMatrix:
    """Convert a dense 2-D array to canonical CSC, dropping exact zeros."""
    mat = np.ascontiguousarray(mat, dtype=np.float64)
    if mat.ndim != 2:
        raise MalformedSparse("dense input must be 2-D")
    rows, cols = np.nonzero(mat)
    return csc_from_triplets(mat.shape[0], mat.shape[1], rows, cols, mat[rows, cols])


def transpose(a: SparseMatrix) -> SparseMatrix:
    rows, cols, vals = _coo_of(a)
    return csc_from_triplets(a.ncols, a.nrows, cols, rows, vals)


def _coo_of(a: SparseMatrix):
    cols = np.repeat(np.arange(a.ncols, dtype=np.int64), np.diff(a.colptr))
    return a.rowidx, cols, a.values


@njit(cache=True, nogil=True)
def _spmv_kernel(ncols, colptr, rowidx, values, x, out):
    out[:] = 0.0
    for j in range(ncols):
        xj = x[j]
        if xj != 0.0:
            for p in range(colptr[j], colptr[j + 1]):
                out[rowidx[p]] += values[p] * xj


@njit(cache=True, nogil=True)
def _spmv_t_kernel(ncols, colptr, rowidx, values, y, out):
    for j in range(ncols):
        acc = 0.0
        for p in range(colptr[j], colptr[j + 1]):
            acc += values[p] * y[rowidx[p]]
        out[j] = acc


@njit(cache=True, nogil=True)
def _spmv_sym_upper_kernel(ncols, colptr, rowidx, values, x, out):
    # Upper-triangle storage of a symmetric matrix; the mirrored lower
    # triangle is applied on the fly.
    out[:] = 0.0
    for j in range(ncols):
        xj = x[j]
        for p in range(colptr[j], colptr[j + 1]):
            i = rowidx[p]
            v = values[p]
            out[i] += v * xj
            if i != j:
                out[j] += v * x[i]


def spmv(a: SparseMatrix, x: np.ndarray) -> np.ndarray:
    """y = A @ x."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (a.ncols,):
        raise ValueError(f"x has shape {x.shape}, expected ({a.ncols},)")
    out = np.empty(a.nrows)
    _spmv_kernel(a.ncols, a.colptr, a.rowidx, a.values, x, out)
    return out


def spmv_transpose(a: SparseMatrix, y: np.ndarray) -> np.ndarray:
    """x = A.T @ y without forming the transpose."""
    y = np.asarray(y, dtype=np.float64)
    if y.shape != (a.nrows,):
        raise ValueError(f"y has shape {y.shape}, expected ({a.nrows},)")
    out = np.empty(a.ncols)
    _spmv_t_kernel(a.ncols, a.colptr, a.rowidx, a.values, y, out)
    return out


def spmv_sym_upper(upper: SparseMatrix, x: np.ndarray) -> np.ndarray:
    """y = S @ x where only the upper triangle of symmetric S is stored."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (upper.ncols,):
        raise ValueError(f"x has shape {x.shape}, expected ({upper.ncols},)")
    out = np.empty(upper.nrows)
    _spmv_sym_upper_kernel(upper.ncols, upper.colptr, upper.rowidx, upper.values, x, out)
    return out
