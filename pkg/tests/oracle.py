"""Independent reference solver: brute-force active-set enumeration.

For a strictly convex QP with finite box rows, every candidate optimum
is the solution of an equality-constrained QP over some subset of rows
pinned at either bound. This enumerates all subsets of size <= n with
all lower/upper assignments, solves the KKT systems in vectorized
batches, filters primal-feasible candidates, and returns the feasible
candidate with the least objective. Exponential, for tiny problems only.
"""

from __future__ import annotations

import itertools
import math

import numpy as np


def enumeration_count(n: int, m: int) -> int:
    """Number of candidate (subset, bound-assignment) pairs."""
    return sum(math.comb(m, k) * 2 ** k for k in range(min(n, m) + 1))


def _candidate_batches(m: int, k: int, chunk: int):
    combos = np.array(list(itertools.combinations(range(m), k)), dtype=np.int64)
    if k == 0:
        yield combos.reshape(1, 0), np.zeros((1, 0), dtype=bool)
        return
    signs = np.array(list(itertools.product((False, True), repeat=k)), dtype=bool)
    nc, ns = combos.shape[0], signs.shape[0]
    per = max(1, chunk // ns)
    for start in range(0, nc, per):
        sub = combos[start:start + per]
        yield (np.repeat(sub, ns, axis=0),
               np.tile(signs, (sub.shape[0], 1)))


def solve_reference(P: np.ndarray, q: np.ndarray, A: np.ndarray,
                    l: np.ndarray, u: np.ndarray,
                    feas_tol: float = 1e-9, chunk: int = 16384):
    """(x*, f*) by exhaustive active-set enumeration. P must be positive
    definite and all bounds finite."""
    n = P.shape[0]
    m = A.shape[0]
    finite = np.concatenate((l[np.isfinite(l)], u[np.isfinite(u)]))
    scale = max(1.0, np.max(np.abs(finite))) if finite.size else 1.0
    tol = feas_tol * scale

    best_obj = np.inf
    best_x = None
    for k in range(min(n, m) + 1):
        for combos, signs in _candidate_batches(m, k, chunk):
            batch = combos.shape[0]
            asub = A[combos]                        # (batch, k, n)
            kkt = np.zeros((batch, n + k, n + k))
            kkt[:, :n, :n] = P
            kkt[:, n:, :n] = asub
            kkt[:, :n, n:] = np.swapaxes(asub, 1, 2)
            rhs = np.empty((batch, n + k))
            rhs[:, :n] = -q
            rhs[:, n:] = np.where(signs, u[combos], l[combos])
            try:
                sol = np.linalg.solve(kkt, rhs[..., None])[..., 0]
                xs = sol[:, :n]
            except np.linalg.LinAlgError:
                xs = np.full((batch, n), np.nan)
                for b in range(batch):
                    try:
                        xs[b] = np.linalg.solve(kkt[b], rhs[b])[:n]
                    except np.linalg.LinAlgError:
                        pass  # rank-deficient active set: skip candidate
            ax = xs @ A.T if m else np.zeros((batch, 0))
            feas = np.all(np.isfinite(xs), axis=1)
            if m:
                feas &= np.all(ax >= l - tol, axis=1) & np.all(ax <= u + tol, axis=1)
            if not np.any(feas):
                continue
            objs = 0.5 * np.einsum("bi,ij,bj->b", xs, P, xs) + xs @ q
            objs[~feas] = np.inf
            idx = int(np.argmin(objs))
            if objs[idx] < best_obj:
                best_obj = float(objs[idx])
                best_x = xs[idx].copy()
    if best_x is None:
        raise ValueError("no feasible candidate found (problem infeasible?)")
    return best_x, best_obj


def dense_problem(problem) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Dense (P_full, q, A, l, u) view of a QpProblem for the oracle."""
    pu = problem.P.to_dense()
    pfull = pu + np.triu(pu, 1).T
    return pfull, problem.q, problem.A.to_dense(), problem.l, problem.u
