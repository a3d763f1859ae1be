"""Pivot-free sparse LDL' factorization of symmetric quasidefinite matrices.

One-time work per sparsity pattern: symmetric permutation, elimination
tree, and exact per-column counts of L, so every numeric refactorization
runs in preallocated storage. The numeric phase is the up-looking
algorithm: row k of L is obtained from a sparse triangular solve whose
pattern is read off the elimination tree.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .sparse import SparseMatrix


class FactorizationFailed(RuntimeError):
    """Zero, non-finite, or wrong-sign pivot: the factorization broke down."""


@dataclass
class SymbolicFactorization:
    """Ordering and structure of L for a fixed symmetric pattern.

    perm[k] is the original index eliminated k-th; pinv is its inverse.
    parent is the elimination tree of the permuted matrix (-1 = root);
    col_counts[j] counts the strictly-below-diagonal entries of L column j.
    cp/ci/value_map cache the permuted upper-triangle pattern: a numeric
    refactorization only has to gather values through value_map.
    """

    n: int
    perm: np.ndarray
    pinv: np.ndarray
    parent: np.ndarray
    col_counts: np.ndarray
    lnz: int
    cp: np.ndarray
    ci: np.ndarray
    value_map: np.ndarray


@dataclass
class LdlFactors:
    """L (unit lower triangular, unit diagonal implicit) and diagonal D."""

    L: SparseMatrix
    D: np.ndarray
    perm: np.ndarray
    pinv: np.ndarray


@njit(cache=True, nogil=True)
def _symperm_upper(n, ap, ai, pinv, cp, ci, value_map):
    # Upper triangle of P*K*P' from the upper triangle of K. Two passes:
    # count, then place. Columns come out unsorted, which the up-looking
    # factorization tolerates.
    counts = np.zeros(n + 1, np.int64)
    for j in range(n):
        for p in range(ap[j], ap[j + 1]):
            i = ai[p]
            i2 = pinv[i]
            j2 = pinv[j]
            c = i2 if i2 > j2 else j2
            counts[c + 1] += 1
    for j in range(n):
        cp[j + 1] = cp[j] + counts[j + 1]
    w = cp[:n].copy()
    for j in range(n):
        for p in range(ap[j], ap[j + 1]):
            i = ai[p]
            i2 = pinv[i]
            j2 = pinv[j]
            if i2 > j2:
                c, r = i2, j2
            else:
                c, r = j2, i2
            q = w[c]
            w[c] = q + 1
            ci[q] = r
            value_map[q] = p


@njit(cache=True, nogil=True)
def _etree_counts(n, cp, ci, parent, lnz):
    # Elimination tree and per-column L counts in one pass over the upper
    # pattern, with path compression through the current row marks.
    flag = np.empty(n, np.int64)
    for k in range(n):
        parent[k] = -1
        flag[k] = k
        lnz[k] = 0
        for p in range(cp[k], cp[k + 1]):
            i = ci[p]
            while i < k and flag[i] != k:
                if parent[i] == -1:
                    parent[i] = k
                lnz[i] += 1
                flag[i] = k
                i = parent[i]


@njit(cache=True, nogil=True)
def _ldl_numeric(n, cp, ci, cx, lp, parent, signs, li, lx, d, lnz):
    # Up-looking LDL': for each row k, find the pattern of L(k, :) by
    # walking the etree, then perform the sparse triangular solve. Column
    # entries of L are appended in increasing k, so columns end up sorted.
    # Returns 0 on success, k+1 if pivot k is zero/non-finite/wrong-signed.
    # A sign expectation of 0 disables the sign check for that pivot.
    y = np.zeros(n)
    pattern = np.empty(n, np.int64)
    flag = np.empty(n, np.int64)
    for k in range(n):
        top = n
        flag[k] = k
        lnz[k] = 0
        for p in range(cp[k], cp[k + 1]):
            i = ci[p]
            y[i] += cx[p]
            ln = 0
            while flag[i] != k:
                pattern[ln] = i
                ln += 1
                flag[i] = k
                i = parent[i]
            while ln > 0:
                top -= 1
                ln -= 1
                pattern[top] = pattern[ln]
        dk = y[k]
        y[k] = 0.0
        for s in range(top, n):
            i = pattern[s]
            yi = y[i]
            y[i] = 0.0
            p2 = lp[i] + lnz[i]
            for p in range(lp[i], p2):
                y[li[p]] -= lx[p] * yi
            lki = yi / d[i]
            dk -= lki * yi
            li[p2] = k
            lx[p2] = lki
            lnz[i] += 1
        d[k] = dk
        if dk == 0.0 or not np.isfinite(dk) or dk * signs[k] < 0.0:
            return k + 1
    return 0


@njit(cache=True, nogil=True)
def _lsolve_unit(n, lp, li, lx, lnz, x):
    for j in range(n):
        xj = x[j]
        if xj != 0.0:
            for p in range(lp[j], lp[j] + lnz[j]):
                x[li[p]] -= lx[p] * xj


@njit(cache=True, nogil=True)
def _ltsolve_unit(n, lp, li, lx, lnz, x):
    for j in range(n - 1, -1, -1):
        acc = x[j]
        for p in range(lp[j], lp[j] + lnz[j]):
            acc -= lx[p] * x[li[p]]
        x[j] = acc


def symbolic_factorize(pattern: SparseMatrix, perm: np.ndarray) -> SymbolicFactorization:
    """Analyze an upper-triangle symmetric pattern under a permutation."""
    n = pattern.ncols
    perm = np.asarray(perm, dtype=np.int64)
    if perm.shape != (n,) or np.any(np.sort(perm) != np.arange(n)):
        raise ValueError("perm must be a permutation of 0..n-1")
    pinv = np.empty(n, dtype=np.int64)
    pinv[perm] = np.arange(n, dtype=np.int64)

    nnz = pattern.nnz
    cp = np.zeros(n + 1, dtype=np.int64)
    ci = np.empty(nnz, dtype=np.int64)
    value_map = np.empty(nnz, dtype=np.int64)
    _symperm_upper(n, pattern.colptr, pattern.rowidx, pinv, cp, ci, value_map)

    parent = np.empty(n, dtype=np.int64)
    col_counts = np.empty(n, dtype=np.int64)
    _etree_counts(n, cp, ci, parent, col_counts)
    return SymbolicFactorization(n=n, perm=perm, pinv=pinv, parent=parent,
                                 col_counts=col_counts, lnz=int(col_counts.sum()),
                                 cp=cp, ci=ci, value_map=value_map)


def numeric_factorize_values(values: np.ndarray, sym: SymbolicFactorization,
                             signs: np.ndarray) -> LdlFactors:
    """Factorize using the cached permuted pattern; ``values`` belong to the
    matrix the symbolic analysis was built from. ``signs`` gives the
    expected pivot sign (+1/-1) per original index."""
    n = sym.n
    cx = values[sym.value_map]
    lp = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(sym.col_counts, out=lp[1:])
    li = np.empty(sym.lnz, dtype=np.int64)
    lx = np.empty(sym.lnz)
    d = np.empty(n)
    lnz = np.empty(n, dtype=np.int64)
    psigns = np.asarray(signs, dtype=np.float64)[sym.perm]
    err = _ldl_numeric(n, sym.cp, sym.ci, cx, lp, sym.parent, psigns, li, lx, d, lnz)
    if err:
        raise FactorizationFailed(
            f"breakdown at pivot {err - 1}: zero or sign-degenerate diagonal")
    assert np.array_equal(lnz, sym.col_counts), "numeric pattern left the symbolic counts"
    L = SparseMatrix(n, n, lp, li, lx)
    return LdlFactors(L=L, D=d, perm=sym.perm, pinv=sym.pinv)


def numeric_factorize(kkt, sym: SymbolicFactorization) -> LdlFactors:
    """Factor a KktMatrix with pivot signs enforced by its quasidefinite
    block structure. Raises FactorizationFailed on breakdown."""
    return numeric_factorize_values(kkt.matrix.values, sym, kkt.pivot_signs())


def ldl_solve(factors: LdlFactors, rhs: np.ndarray) -> np.ndarray:
    """Solve K s = rhs given K = P' L D L' P."""
    n = factors.L.ncols
    rhs = np.asarray(rhs, dtype=np.float64)
    if rhs.shape != (n,):
        raise ValueError(f"rhs has shape {rhs.shape}, expected ({n},)")
    w = rhs[factors.perm]
    lp = factors.L.colptr
    lnz = np.diff(lp)
    _lsolve_unit(n, lp, factors.L.rowidx, factors.L.values, lnz, w)
    w /= factors.D
    _ltsolve_unit(n, lp, factors.L.rowidx, factors.L.values, lnz, w)
    out = np.empty(n)
    out[factors.perm] = w
    return out
