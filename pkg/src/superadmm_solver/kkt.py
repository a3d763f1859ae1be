"""Assembly and maintenance of the quasidefinite KKT system.

The coefficient matrix is

    [ P + sigma*I   A'        ]
    [ A            -inv(R)    ]

stored upper-triangular. Its sparsity pattern never changes during a
solve; penalty updates only rewrite the m trailing diagonal values, whose
positions are recorded at assembly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .sparse import SparseMatrix, csc_from_triplets, infinity_norm, spmv_sym_upper


@dataclass
class KktMatrix:
    """Upper triangle of the (n+m) x (n+m) KKT matrix.

    diag22[i] is the position in ``matrix.values`` of the (n+i, n+i)
    entry holding -1/rho_i.
    """

    matrix: SparseMatrix
    n: int
    m: int
    diag22: np.ndarray

    @property
    def size(self) -> int:
        return self.n + self.m

    def pivot_signs(self) -> np.ndarray:
        """Expected LDL' pivot signs: + for the proximal block, - for -inv(R)."""
        s = np.ones(self.size)
        s[self.n:] = -1.0
        return s


def assemble_kkt(P: SparseMatrix, A: SparseMatrix, sigma: float,
                 R_diag: np.ndarray) -> KktMatrix:
    """Build the upper-triangle KKT matrix for penalties R_diag (> 0)."""
    n = P.ncols
    m = A.nrows
    R_diag = np.asarray(R_diag, dtype=np.float64)
    if R_diag.shape != (m,):
        raise ValueError(f"R_diag has shape {R_diag.shape}, expected ({m},)")
    if m and not np.all(R_diag > 0.0):
        raise ValueError("R_diag must be strictly positive")

    p_cols = np.repeat(np.arange(n, dtype=np.int64), np.diff(P.colptr))
    a_cols = np.repeat(np.arange(n, dtype=np.int64), np.diff(A.colptr))

    rows = np.concatenate((
        P.rowidx,                                   # upper triangle of P
        np.arange(n, dtype=np.int64),               # sigma on the leading diagonal
        a_cols,                                     # A' block: entry (j, n+i)
        np.arange(n, n + m, dtype=np.int64),        # -1/rho on the trailing diagonal
    ))
    cols = np.concatenate((
        p_cols,
        np.arange(n, dtype=np.int64),
        A.rowidx + n,
        np.arange(n, n + m, dtype=np.int64),
    ))
    vals = np.concatenate((
        P.values,
        np.full(n, float(sigma)),
        A.values,
        -1.0 / R_diag,
    ))
    mat = csc_from_triplets(n + m, n + m, rows, cols, vals)

    # The trailing diagonal entry is the largest row index of its column,
    # hence the last entry after canonicalization.
    diag22 = mat.colptr[n + 1:n + m + 1] - 1
    assert np.array_equal(mat.rowidx[diag22], np.arange(n, n + m)), \
        "trailing diagonal misplaced"
    return KktMatrix(matrix=mat, n=n, m=m, diag22=diag22)


def update_kkt_penalties(kkt: KktMatrix, R_diag: np.ndarray) -> KktMatrix:
    """Refresh the -1/rho_i diagonal in place; the pattern is untouched."""
    R_diag = np.asarray(R_diag, dtype=np.float64)
    if R_diag.shape != (kkt.m,):
        raise ValueError(f"R_diag has shape {R_diag.shape}, expected ({kkt.m},)")
    kkt.matrix.values[kkt.diag22] = -1.0 / R_diag
    return kkt


def kkt_residual(kkt: KktMatrix, solution: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """rhs - K @ solution with the full symmetric K."""
    return rhs - spmv_sym_upper(kkt.matrix, solution)


def kkt_residual_inf_norm(kkt: KktMatrix, solution: np.ndarray, rhs: np.ndarray) -> float:
    return infinity_norm(kkt_residual(kkt, solution, rhs))
