"""QP problem container and input validation.

The solver works on

    minimize    0.5 * x'Px + q'x
    subject to  l <= Ax <= u

with P symmetric positive semidefinite, stored upper-triangular only.
Equality constraints are rows with l[i] == u[i]; one-sided rows use
infinite bounds.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .sparse import MalformedSparse, SparseMatrix, csc_canonical

#: Any bound at or beyond this magnitude is treated as infinite.
INFINITY_THRESHOLD = 1e30


class DimensionMismatch(ValueError):
    """Array lengths or matrix shapes are inconsistent."""


class BoundsError(ValueError):
    """Some lower bound exceeds the matching upper bound."""


class NonFiniteData(ValueError):
    """NaN anywhere, or infinite entries in P, A, or q."""


@dataclass
class QpProblem:
    """Validated, canonical problem data. Immutable by convention."""

    n: int
    m: int
    P: SparseMatrix
    q: np.ndarray
    A: SparseMatrix
    l: np.ndarray
    u: np.ndarray

    def objective(self, x: np.ndarray) -> float:
        from .sparse import spmv_sym_upper
        return float(0.5 * x @ spmv_sym_upper(self.P, x) + self.q @ x)


def _vector(name: str, v, length: int) -> np.ndarray:
    arr = np.asarray(v, dtype=np.float64).copy()
    if arr.shape != (length,):
        raise DimensionMismatch(f"{name} has shape {arr.shape}, expected ({length},)")
    return arr


def normalize_bounds(l: np.ndarray, u: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Map huge-magnitude bound entries to IEEE infinities, in place."""
    l[l <= -INFINITY_THRESHOLD] = -np.inf
    l[l >= INFINITY_THRESHOLD] = np.inf
    u[u <= -INFINITY_THRESHOLD] = -np.inf
    u[u >= INFINITY_THRESHOLD] = np.inf
    return l, u


def validate_problem(n: int, m: int, P_colptr, P_rowidx, P_values, q,
                     A_colptr, A_rowidx, A_values, l, u) -> QpProblem:
    """Check raw CSC/vector data and return a canonical QpProblem.

    Bounds with magnitude >= 1e30 are normalized to +-inf; sparse arrays
    are sorted and duplicate entries summed. Raises DimensionMismatch,
    BoundsError, MalformedSparse, or NonFiniteData.
    """
    n = int(n)
    m = int(m)
    if n < 0 or m < 0:
        raise DimensionMismatch("n and m must be non-negative")

    P = csc_canonical(n, n, P_colptr, P_rowidx, P_values)
    A = csc_canonical(m, n, A_colptr, A_rowidx, A_values)
    q = _vector("q", q, n)
    l = _vector("l", l, m)
    u = _vector("u", u, m)

    for name, arr in (("P", P.values), ("A", A.values), ("q", q)):
        if arr.size and not np.all(np.isfinite(arr)):
            raise NonFiniteData(f"{name} contains NaN or infinite entries")
    if np.any(np.isnan(l)) or np.any(np.isnan(u)):
        raise NonFiniteData("bounds contain NaN")

    cols = np.repeat(np.arange(n, dtype=np.int64), np.diff(P.colptr))
    if np.any(P.rowidx > cols):
        raise MalformedSparse("P must store the upper triangle only")

    normalize_bounds(l, u)
    bad = np.flatnonzero(l > u)
    if bad.size:
        i = int(bad[0])
        raise BoundsError(f"l[{i}] = {l[i]} exceeds u[{i}] = {u[i]}")
    # [+inf, +inf] and [-inf, -inf] intervals are unsatisfiable by any
    # finite Ax, so reject them here rather than poison the iterates.
    if np.any(np.isinf(l) & (l > 0)) or np.any(np.isinf(u) & (u < 0)):
        raise BoundsError("bound interval contains no finite point")

    return QpProblem(n=n, m=m, P=P, q=q, A=A, l=l, u=u)


def problem_from_parts(P: SparseMatrix, q, A: SparseMatrix, l, u) -> QpProblem:
    """validate_problem convenience wrapper for already-built matrices."""
    return validate_problem(P.ncols, A.nrows, P.colptr, P.rowidx, P.values, q,
                            A.colptr, A.rowidx, A.values, l, u)
