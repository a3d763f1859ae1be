import math

import numpy as np
import pytest

import superadmm_solver as sa
from superadmm_solver.generators import _sparse_gaussian
from superadmm_solver.rng import RandomStream
from oracle import dense_problem, solve_reference


def test_rng_streams_are_deterministic_and_independent():
    a = RandomStream(123, 0)
    b = RandomStream(123, 0)
    assert np.array_equal(a.raw(10), b.raw(10))
    # batching does not change the sequence
    c = RandomStream(123, 0)
    assert np.array_equal(np.concatenate((c.raw(3), c.raw(7))), RandomStream(123, 0).raw(10))
    assert not np.array_equal(RandomStream(123, 1).raw(10), RandomStream(123, 2).raw(10))


def test_rng_distributions_sane():
    s = RandomStream(7, 0)
    u = s.uniform(20000)
    assert 0.0 <= u.min() and u.max() < 1.0
    assert abs(u.mean() - 0.5) < 0.01
    g = RandomStream(7, 1).normal(20000, var=4.0)
    assert abs(g.mean()) < 0.06
    assert abs(g.std() - 2.0) < 0.05


def test_dare_scalar_fixed_point():
    # root of P = 0.25 P - 0.25 P^2 / (0.1 + P) + 1, i.e. the positive
    # solution of P^2 - 0.925 P - 0.1 = 0
    expect = (0.925 + math.sqrt(0.925 ** 2 + 0.4)) / 2.0
    P = sa.solve_dare(np.array([[0.5]]), np.array([[1.0]]),
                      np.array([[1.0]]), np.array([[0.1]]))
    assert P[0, 0] == pytest.approx(expect, rel=1e-9)


def test_dare_nilpotent_and_symmetry():
    Q = np.diag([1.0, 2.0])
    P = sa.solve_dare(np.zeros((2, 2)), np.ones((2, 1)), Q, np.array([[0.1]]))
    assert np.array_equal(P, Q)
    rng = np.random.default_rng(5)
    A = np.eye(3) + 0.1 * rng.normal(size=(3, 3))
    B = rng.normal(size=(3, 2))
    P = sa.solve_dare(A, B, np.diag([1.0, 2.0, 3.0]), 0.1 * np.eye(2))
    assert np.max(np.abs(P - P.T)) == 0.0


def test_mpc_dimensions():
    p = sa.gen_mpc(2, 1, seed=3)
    assert (p.n, p.m) == (5, 7)
    p = sa.gen_mpc(10, 10, seed=0)
    assert (p.n, p.m) == (160, 260)


def test_mpc_rejects_bad_sizes():
    with pytest.raises(sa.GeneratorError):
        sa.gen_mpc(3, 5, seed=0)
    with pytest.raises(sa.GeneratorError):
        sa.gen_mpc(4, 0, seed=0)


def test_mpc_initial_state_strictly_inside_half_box():
    for seed in range(5):
        p = sa.gen_mpc(6, 4, seed=seed)
        nx = 6
        x0 = p.l[:nx]
        assert np.array_equal(x0, p.u[:nx])  # stage-0 rows are equalities
        x_bar = p.u[(4 + 1) * nx:(4 + 1) * nx + nx]  # first state box block
        assert np.all(np.abs(x0) <= 0.5 * x_bar)


def test_lasso_dimensions_and_lambda_consistency():
    p = sa.gen_lasso(1, seed=0)
    assert (p.n, p.m) == (102, 102)
    p = sa.gen_lasso(3, seed=5)
    m_data, n = 300, 3
    assert (p.n, p.m) == (m_data + 2 * n, m_data + 2 * n)
    # recompute lambda from the emitted blocks: equality rows are
    # [I, -A_data, 0] with l = u = -b, and q carries lambda on the t block
    ad = p.A.to_dense()[:m_data, m_data:m_data + n]
    b = -p.l[:m_data]
    lam = np.max(np.abs((-ad).T @ b)) / 5.0
    assert p.q[m_data + n:] == pytest.approx(np.full(n, lam), rel=1e-15)


def test_huber_dimensions():
    p = sa.gen_huber(1, seed=0)
    assert (p.n, p.m) == (301, 300)
    p = sa.gen_huber(2, seed=1)
    assert (p.n, p.m) == (2 + 3 * 200, 600)


def test_huber_tiny_instance_r_s_complementary():
    # 3-point instances solved against the enumeration oracle; at the
    # optimum r_i * s_i vanishes (never both sides of the loss active).
    # Seeds picked so the 3x1 data matrix has at least one nonzero entry,
    # otherwise x is unconstrained and the optimum is non-unique.
    for seed in (1, 5):
        p = sa.gen_huber(1, seed=seed, m_data=3)
        res = sa.solve(p, sa.Settings(eps_abs=1e-10))
        assert res.status is sa.SolveStatus.SOLVED
        r = res.x[1 + 3:1 + 6]
        s = res.x[1 + 6:1 + 9]
        assert np.all(r * s <= 1e-6)
        xo, fo = solve_reference(*dense_problem(p))
        assert abs(p.objective(res.x) - fo) <= 1e-8 * (1 + abs(fo))


def test_random_qp_properties():
    p = sa.gen_random_qp(30, 45, seed=6)
    assert (p.n, p.m) == (30, 45)
    pd = p.P.to_dense()
    pfull = pd + np.triu(pd, 1).T
    assert np.linalg.eigvalsh(pfull).min() >= 0.01 - 1e-12
    assert np.all(p.l <= 0.0) and np.all(p.u >= 0.0)  # x = 0 feasible


def test_generators_deterministic():
    for make in (lambda s: sa.gen_mpc(4, 3, seed=s),
                 lambda s: sa.gen_lasso(2, seed=s),
                 lambda s: sa.gen_huber(2, seed=s),
                 lambda s: sa.gen_random_qp(7, 9, seed=s)):
        a, b = make(11), make(11)
        assert np.array_equal(a.P.values, b.P.values)
        assert np.array_equal(a.q, b.q)
        assert np.array_equal(a.A.values, b.A.values)
        assert np.array_equal(a.A.rowidx, b.A.rowidx)
        assert np.array_equal(a.l, b.l) and np.array_equal(a.u, b.u)
        c = make(12)
        assert not (np.array_equal(a.q, c.q) and np.array_equal(a.l, c.l))


def test_sparse_fill_fraction():
    m = _sparse_gaussian(RandomStream(1, 0), RandomStream(1, 1), 500, 40)
    frac = m.nnz / (500 * 40)
    assert 0.13 <= frac <= 0.17


def test_generator_spec_dispatch():
    spec = sa.GeneratorSpec("random", n=5, m=8, seed=4)
    p = spec.generate()
    assert (p.n, p.m) == (5, 8)
    with pytest.raises(sa.GeneratorError):
        sa.GeneratorSpec("simplex", n=5).generate()
