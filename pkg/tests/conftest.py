import numpy as np
import pytest

import superadmm_solver as sa


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels():
    """Trigger all numba compilations before any timed test body runs."""
    prob = sa.gen_random_qp(4, 6, seed=0)
    sa.solve(prob, sa.Settings(eps_abs=1e-8))


def random_quasidefinite(rng, n, m, density=0.3, r_lo=1e-2, r_hi=1e2):
    """A KktMatrix with random PSD-plus-shift leading block and random A."""
    mat = rng.normal(size=(n, n)) * (rng.random((n, n)) < density)
    pd = mat @ mat.T / n + np.eye(n)
    P = sa.csc_from_dense(np.triu(pd))
    ad = rng.normal(size=(m, n)) * (rng.random((m, n)) < density)
    A = sa.csc_from_dense(ad) if m else sa.SparseMatrix(
        0, n, np.zeros(n + 1, dtype=np.int64), np.empty(0, dtype=np.int64), np.empty(0))
    r_diag = np.exp(rng.uniform(np.log(r_lo), np.log(r_hi), size=m))
    return sa.assemble_kkt(P, A, 1e-3, r_diag), r_diag


def dense_sym(kkt):
    upper = kkt.matrix.to_dense()
    return upper + np.triu(upper, 1).T
