"""Seeded benchmark problem generators.

Four families: receding-horizon control (mpc), lasso and huber
regression recast as QPs, and box-constrained random QPs. Every
generator is a pure function of (sizes, seed); random draws come from
the portable streams in rng.py, one stream per matrix, with sparse
matrices drawing their keep-mask and values from separate streams in
column-major entry order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from numba import njit

from .problem import QpProblem, problem_from_parts
from .rng import RandomStream
from .sparse import SparseMatrix, csc_from_triplets, spmv, spmv_transpose


@njit(cache=True, nogil=True)
def _gram_dense(n, colptr, rowidx, values, out):
    # out = M @ M' accumulated column by column in a fixed order, so the
    # result is bitwise reproducible across BLAS builds and machines.
    for k in range(n):
        for p in range(colptr[k], colptr[k + 1]):
            i = rowidx[p]
            vi = values[p]
            for q in range(colptr[k], colptr[k + 1]):
                out[i, rowidx[q]] += vi * values[q]


class GeneratorError(RuntimeError):
    """A generator draw produced an unusable instance (caller may reseed)."""


@dataclass(frozen=True)
class GeneratorSpec:
    """Family plus its size parameters; see the gen_* functions."""

    family: str
    seed: int = 0
    nx: Optional[int] = None
    horizon: Optional[int] = None
    n: Optional[int] = None
    m: Optional[int] = None

    def generate(self) -> QpProblem:
        if self.family == "mpc":
            return gen_mpc(self.nx, self.horizon, self.seed)
        if self.family == "lasso":
            return gen_lasso(self.n, self.seed)
        if self.family == "huber":
            return gen_huber(self.n, self.seed)
        if self.family == "random":
            return gen_random_qp(self.n, self.m, self.seed)
        raise GeneratorError(f"unknown family {self.family!r}")


def _dense_gaussian(stream: RandomStream, nrows: int, ncols: int,
                    var: float = 1.0) -> np.ndarray:
    # Column-major entry order so the draw sequence matches CSC layout.
    return stream.normal(nrows * ncols, var=var).reshape((ncols, nrows)).T


def _sparse_gaussian(mask_stream: RandomStream, value_stream: RandomStream,
                     nrows: int, ncols: int, density: float = 0.15) -> SparseMatrix:
    mask = mask_stream.bernoulli(nrows * ncols, density).reshape((ncols, nrows))
    cols, rows = np.nonzero(mask)
    vals = value_stream.normal(rows.size)
    return csc_from_triplets(nrows, ncols, rows, cols, vals)


def solve_dare(Abar: np.ndarray, Bbar: np.ndarray, Q: np.ndarray,
               R: np.ndarray, tol: float = 1e-10,
               max_iter: int = 100_000) -> np.ndarray:
    """Fixed point of P <- A'PA - A'PB (R + B'PB)^-1 B'PA + Q from P = Q.

    Raises GeneratorError when the iteration cap is hit (the sampled
    system is not stabilizable; redraw with fresh randomness).
    """
    P = Q.copy()
    for _ in range(max_iter):
        BtP = Bbar.T @ P
        gain = np.linalg.solve(R + BtP @ Bbar, BtP @ Abar)
        P_next = Abar.T @ P @ Abar - (BtP @ Abar).T @ gain + Q
        P_next = 0.5 * (P_next + P_next.T)
        if np.max(np.abs(P_next - P)) <= tol * max(np.max(np.abs(P)), 1e-300):
            return P_next
        P = P_next
    raise GeneratorError("Riccati recursion did not converge")


def gen_mpc(nx: int, horizon: int, seed: int) -> QpProblem:
    """Receding-horizon control QP over states x_0..x_N and inputs u_0..u_{N-1}.

    Dynamics Abar = I + delta with delta ~ N(0, 0.1), Bbar ~ N(0, 1),
    stage cost diag Q ~ U(0, 10) on states and 0.1 I on inputs, terminal
    cost from the Riccati fixed point. Equality rows pin x_0 and the
    dynamics; symmetric boxes U(1, 5) bound later states and all inputs;
    x_0 is drawn from the half-box.
    """
    if nx < 2 or nx % 2:
        raise GeneratorError("nx must be even and >= 2")
    if horizon < 1:
        raise GeneratorError("horizon must be >= 1")
    N = horizon
    nu = nx // 2

    delta = _dense_gaussian(RandomStream(seed, 0), nx, nx, var=0.1)
    Abar = np.eye(nx) + delta
    Bbar = _dense_gaussian(RandomStream(seed, 1), nx, nu)
    q_diag = RandomStream(seed, 2).uniform(nx, 0.0, 10.0)
    x_bar = RandomStream(seed, 3).uniform(nx, 1.0, 5.0)
    u_bar = RandomStream(seed, 4).uniform(nu, 1.0, 5.0)
    x0 = RandomStream(seed, 5).uniform(nx, -0.5, 0.5) * x_bar

    Q = np.diag(q_diag)
    R = 0.1 * np.eye(nu)
    QT = solve_dare(Abar, Bbar, Q, R)

    n = (N + 1) * nx + N * nu
    m = (N + 1) * nx + N * nx + N * nu

    def xoff(i):
        return i * nx

    def uoff(i):
        return (N + 1) * nx + i * nu

    # cost: objective 0.5 x'Px reproduces x'Qx sums, so blocks carry a factor 2
    pr, pc, pv = [], [], []
    for i in range(N):
        idx = xoff(i) + np.arange(nx)
        pr.append(idx)
        pc.append(idx)
        pv.append(2.0 * q_diag)
    tr, tc = np.triu_indices(nx)
    pr.append(xoff(N) + tr)
    pc.append(xoff(N) + tc)
    pv.append(2.0 * QT[tr, tc])
    for i in range(N):
        idx = uoff(i) + np.arange(nu)
        pr.append(idx)
        pc.append(idx)
        pv.append(np.full(nu, 0.2))
    P = csc_from_triplets(n, n, np.concatenate(pr), np.concatenate(pc),
                          np.concatenate(pv))

    ar, ac, av = [], [], []
    l = np.empty(m)
    u = np.empty(m)

    idx = np.arange(nx)
    ar.append(idx)
    ac.append(xoff(0) + idx)
    av.append(np.ones(nx))
    l[:nx] = u[:nx] = x0

    rr, cc = np.indices((nx, nx)).reshape(2, -1)
    br, bc = np.indices((nx, nu)).reshape(2, -1)
    for i in range(N):
        base = nx + i * nx
        ar.append(base + rr)
        ac.append(xoff(i) + cc)
        av.append(Abar[rr, cc])
        ar.append(base + br)
        ac.append(uoff(i) + bc)
        av.append(Bbar[br, bc])
        ar.append(base + idx)
        ac.append(xoff(i + 1) + idx)
        av.append(-np.ones(nx))
        l[base:base + nx] = u[base:base + nx] = 0.0

    box_x = (N + 1) * nx
    for i in range(1, N + 1):
        base = box_x + (i - 1) * nx
        ar.append(base + idx)
        ac.append(xoff(i) + idx)
        av.append(np.ones(nx))
        l[base:base + nx] = -x_bar
        u[base:base + nx] = x_bar

    box_u = box_x + N * nx
    uidx = np.arange(nu)
    for i in range(N):
        base = box_u + i * nu
        ar.append(base + uidx)
        ac.append(uoff(i) + uidx)
        av.append(np.ones(nu))
        l[base:base + nu] = -u_bar
        u[base:base + nu] = u_bar

    A = csc_from_triplets(m, n, np.concatenate(ar), np.concatenate(ac),
                          np.concatenate(av))
    return problem_from_parts(P, np.zeros(n), A, l, u)


def gen_lasso(n: int, seed: int) -> QpProblem:
    """l1-regularized least squares over variables (y, x, t).

    min y'y + lambda 1't  s.t.  y = Ax - b,  -t <= x <= t,
    with A (100n x n) 15% dense N(0, 1), b = Av + w for a half-sparse v,
    and lambda = ||A'b||_inf / 5.
    """
    if n < 1:
        raise GeneratorError("n must be >= 1")
    m_data = 100 * n

    A_data = _sparse_gaussian(RandomStream(seed, 0), RandomStream(seed, 1),
                              m_data, n)
    v_keep = RandomStream(seed, 2).bernoulli(n, 0.5)
    v = np.zeros(n)
    v[v_keep] = RandomStream(seed, 3).normal(int(v_keep.sum()), var=1.0 / n)
    w = RandomStream(seed, 4).normal(m_data)
    b = spmv(A_data, v) + w
    lam = np.max(np.abs(spmv_transpose(A_data, b))) / 5.0

    nv = m_data + 2 * n
    m = m_data + 2 * n

    pr = np.arange(m_data)
    P = csc_from_triplets(nv, nv, pr, pr, np.full(m_data, 2.0))
    q = np.concatenate((np.zeros(m_data + n), np.full(n, lam)))

    ad_cols = np.repeat(np.arange(n), np.diff(A_data.colptr))
    ridx = np.arange(n)
    rows = np.concatenate((
        np.arange(m_data), A_data.rowidx,            # y - Ax = -b
        m_data + ridx, m_data + ridx,                # x - t <= 0
        m_data + n + ridx, m_data + n + ridx,        # x + t >= 0
    ))
    cols = np.concatenate((
        np.arange(m_data), m_data + ad_cols,
        m_data + ridx, m_data + n + ridx,
        m_data + ridx, m_data + n + ridx,
    ))
    vals = np.concatenate((
        np.ones(m_data), -A_data.values,
        np.ones(n), -np.ones(n),
        np.ones(n), np.ones(n),
    ))
    A = csc_from_triplets(m, nv, rows, cols, vals)

    l = np.concatenate((-b, np.full(n, -np.inf), np.zeros(n)))
    u = np.concatenate((-b, np.zeros(n), np.full(n, np.inf)))
    return problem_from_parts(P, q, A, l, u)


def gen_huber(n: int, seed: int, m_data: Optional[int] = None) -> QpProblem:
    """Huber-loss regression over variables (x, u, r, s), threshold M = 1.

    min u'u + 2M 1'(r+s)  s.t.  Ax - u - r + s = b,  r >= 0,  s >= 0,
    with A (100n x n) 15% dense N(0, 1) and 5% of the noise entries
    drawn as U(0, 10) outliers. m_data overrides the 100n row count for
    small test builds.
    """
    if n < 1:
        raise GeneratorError("n must be >= 1")
    if m_data is None:
        m_data = 100 * n

    A_data = _sparse_gaussian(RandomStream(seed, 0), RandomStream(seed, 1),
                              m_data, n)
    v = RandomStream(seed, 2).normal(n, var=1.0 / n)
    outlier = ~RandomStream(seed, 3).bernoulli(m_data, 0.95)
    w = np.empty(m_data)
    w[~outlier] = RandomStream(seed, 4).normal(int((~outlier).sum()), var=0.25)
    w[outlier] = RandomStream(seed, 5).uniform(int(outlier.sum()), 0.0, 10.0)
    b = spmv(A_data, v) + w

    M = 1.0
    nv = n + 3 * m_data
    m = 3 * m_data

    didx = np.arange(m_data)
    P = csc_from_triplets(nv, nv, n + didx, n + didx, np.full(m_data, 2.0))
    q = np.concatenate((np.zeros(n + m_data), np.full(2 * m_data, 2.0 * M)))

    ad_cols = np.repeat(np.arange(n), np.diff(A_data.colptr))
    rows = np.concatenate((
        A_data.rowidx, didx, didx, didx,         # Ax - u - r + s = b
        m_data + didx,                           # r >= 0
        2 * m_data + didx,                       # s >= 0
    ))
    cols = np.concatenate((
        ad_cols, n + didx, n + m_data + didx, n + 2 * m_data + didx,
        n + m_data + didx,
        n + 2 * m_data + didx,
    ))
    vals = np.concatenate((
        A_data.values, -np.ones(m_data), -np.ones(m_data), np.ones(m_data),
        np.ones(m_data),
        np.ones(m_data),
    ))
    A = csc_from_triplets(m, nv, rows, cols, vals)

    l = np.concatenate((b, np.zeros(2 * m_data)))
    u = np.concatenate((b, np.full(2 * m_data, np.inf)))
    return problem_from_parts(P, q, A, l, u)


def gen_random_qp(n: int, m: int, seed: int) -> QpProblem:
    """Box-constrained random QP with P = MM' + 0.01 I (so P > 0) and
    bounds straddling zero, making x = 0 strictly feasible."""
    if n < 1 or m < 1:
        raise GeneratorError("n and m must be >= 1")
    Msp = _sparse_gaussian(RandomStream(seed, 0), RandomStream(seed, 1), n, n)
    Pd = np.zeros((n, n))
    _gram_dense(n, Msp.colptr, Msp.rowidx, Msp.values, Pd)
    Pd += 0.01 * np.eye(n)
    tr, tc = np.triu_indices(n)
    P = csc_from_triplets(n, n, tr, tc, Pd[tr, tc])
    q = RandomStream(seed, 2).normal(n)
    A = _sparse_gaussian(RandomStream(seed, 3), RandomStream(seed, 4), m, n)
    u = RandomStream(seed, 5).uniform(m)
    l = -RandomStream(seed, 6).uniform(m)
    return problem_from_parts(P, q, A, l, u)
