import gc
import json
import os
import subprocess
import sys
import tempfile

import numpy as np
import psutil
import pytest

import superadmm
import superadmm_solver as core
from superadmm_solver import fileio


def one_d_arrays():
    # min x^2 - 4x s.t. x <= 1
    P = ([0, 1], [0], [2.0])
    A = ([0, 1], [0], [1.0])
    return P, [-4.0], A, [-1e31], [1.0]


def test_one_d_clipped_through_binding():
    out = superadmm.solve(*one_d_arrays())
    assert out.status == "solved"
    assert out.x == pytest.approx([1.0], abs=1e-8)
    assert out.y == pytest.approx([2.0], abs=1e-7)


def test_dense_inputs_accepted():
    # full symmetric dense P is reduced to its upper triangle
    P = np.array([[2.0, 0.5], [0.5, 2.0]])
    A = np.eye(2)
    out = superadmm.solve(P, [-1.0, -1.0], A, [-10, -10], [10, 10])
    assert out.status == "solved"
    expect = np.linalg.solve(P, [1.0, 1.0])
    assert out.x == pytest.approx(expect, abs=1e-7)


def test_validation_errors_surface():
    P, q, A, _, _ = one_d_arrays()
    with pytest.raises(core.BoundsError):
        superadmm.solve(P, q, A, [1.0], [0.0])
    with pytest.raises(ValueError):
        superadmm.solve(*one_d_arrays(), settings={"no_such_knob": 1})


def test_default_settings_accessor():
    defaults = superadmm.default_settings()
    assert defaults["alpha"] == 500.0
    assert defaults["eps_abs"] == 1e-8
    # the accessor returns a fresh copy the caller may mutate freely
    defaults["alpha"] = -1
    assert superadmm.default_settings()["alpha"] == 500.0


def test_handle_lifecycle():
    handle = superadmm.setup(*one_d_arrays())
    first = handle.solve()
    again = handle.solve()
    assert np.array_equal(first.x, again.x)
    handle.release()
    handle.release()  # double release is a no-op
    assert handle.released
    with pytest.raises(RuntimeError):
        handle.solve()


def test_binding_matches_core_bitwise():
    prob = core.gen_random_qp(20, 30, seed=6)
    res = core.solve(prob)
    out = superadmm.solve(
        (prob.P.colptr, prob.P.rowidx, prob.P.values), prob.q,
        (prob.A.colptr, prob.A.rowidx, prob.A.values), prob.l, prob.u)
    assert np.array_equal(out.x, res.x)
    assert np.array_equal(out.y, res.y)
    assert out.iterations == res.iterations
    assert out.status == res.status.value


def _cli_solution(problem, tmp):
    ppath = os.path.join(tmp, "p.json")
    spath = os.path.join(tmp, "s.json")
    fileio.save_problem(problem, ppath)
    proc = subprocess.run(
        [sys.executable, "-m", "superadmm_solver.cli", "solve", ppath,
         "--solution", spath], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    with open(spath) as fh:
        return json.load(fh)


def test_binding_matches_cli_bitwise():
    cases = [None, core.gen_random_qp(50, 75, seed=0)]
    with tempfile.TemporaryDirectory() as tmp:
        for prob in cases:
            if prob is None:
                prob = core.validate_problem(1, 1, [0, 1], [0], [2.0], [-4.0],
                                             [0, 1], [0], [1.0], [-1e31], [1.0])
            doc = _cli_solution(prob, tmp)
            out = superadmm.solve(
                (prob.P.colptr, prob.P.rowidx, prob.P.values), prob.q,
                (prob.A.colptr, prob.A.rowidx, prob.A.values), prob.l, prob.u)
            assert out.status == doc["status"]
            assert out.iterations == doc["iterations"]
            assert np.array_equal(out.x, np.asarray(doc["x"]))
            assert np.array_equal(out.y, np.asarray(doc["y"]))


def test_concurrent_solves_on_distinct_handles():
    from concurrent.futures import ThreadPoolExecutor

    problems = [core.gen_random_qp(12, 18, seed=s) for s in range(8)]
    handles = [superadmm.setup(
        (p.P.colptr, p.P.rowidx, p.P.values), p.q,
        (p.A.colptr, p.A.rowidx, p.A.values), p.l, p.u) for p in problems]
    serial = [h.solve() for h in handles]
    with ThreadPoolExecutor(max_workers=4) as pool:
        threaded = list(pool.map(lambda h: h.solve(), handles))
    for a, b in zip(serial, threaded):
        assert np.array_equal(a.x, b.x) and a.iterations == b.iterations


def test_no_memory_growth_over_repeated_solves():
    args = one_d_arrays()
    for _ in range(500):  # warm allocators, caches, JIT
        superadmm.solve(*args)
    gc.collect()
    rss_before = psutil.Process().memory_info().rss
    for _ in range(10_000):
        superadmm.solve(*args)
    gc.collect()
    rss_after = psutil.Process().memory_info().rss
    growth = (rss_after - rss_before) / rss_before
    assert growth <= 0.10, f"RSS grew by {growth:.1%}"
