"""Thin scripting wrapper around the superadmm-solver core.

Exposes one call, ``solve(P, q, A, l, u, settings=None, warm_start=None)``,
over in-memory arrays. Matrices are accepted as dense 2-D arrays, as
``(colptr, rowidx, values)`` CSC triples, or as any object with
``indptr``/``indices``/``data`` attributes (scipy CSC included). Dense P
may be given in full symmetric form; its upper triangle is taken.
Settings are a string-keyed map validated by the core, so the wrapper
needs no per-field maintenance. The wrapper adds no numerics of its own:
results are bitwise identical to the core (and therefore to the CLI) on
the same inputs. The core's factorization and matrix kernels release
the GIL, so separate threads can solve independent problems
concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

import superadmm_solver as _core

__all__ = ["solve", "setup", "default_settings", "ProblemHandle", "SolveOutcome"]


@dataclass
class SolveOutcome:
    x: np.ndarray
    y: np.ndarray
    status: str
    iterations: int
    r_prim: float
    r_dual: float
    runtime: float


def default_settings() -> dict:
    """The core solver defaults, as the map accepted by ``solve``."""
    return _core.default_settings_dict()


def _as_csc_parts(mat, upper_from_dense: bool):
    if hasattr(mat, "indptr") and hasattr(mat, "indices") and hasattr(mat, "data"):
        return mat.indptr, mat.indices, mat.data
    if isinstance(mat, tuple) and len(mat) == 3:
        return mat
    arr = np.asarray(mat, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError("matrix input must be 2-D, a CSC triple, or CSC-like")
    if upper_from_dense:
        arr = np.triu(arr)
    sp = _core.csc_from_dense(arr)
    return sp.colptr, sp.rowidx, sp.values


class ProblemHandle:
    """A validated problem plus settings held by the core.

    ``release()`` drops the core references; releasing twice is a no-op,
    solving after release raises.
    """

    def __init__(self, problem, settings):
        self._problem = problem
        self._settings = settings

    def solve(self, warm_start=None) -> SolveOutcome:
        if self._problem is None:
            raise RuntimeError("handle has been released")
        res = _core.solve(self._problem, self._settings, warm_start=warm_start)
        return SolveOutcome(x=res.x, y=res.y, status=res.status.value,
                            iterations=res.iterations, r_prim=res.r_prim,
                            r_dual=res.r_dual, runtime=res.runtime)

    def release(self) -> None:
        self._problem = None
        self._settings = None

    @property
    def released(self) -> bool:
        return self._problem is None


def setup(P, q, A, l, u, settings: dict | None = None) -> ProblemHandle:
    """Validate arrays once and keep them for repeated solves."""
    q = np.asarray(q, dtype=np.float64)
    l = np.asarray(l, dtype=np.float64)
    u = np.asarray(u, dtype=np.float64)
    n = q.shape[0] if q.ndim == 1 else 0
    m = l.shape[0] if l.ndim == 1 else 0
    p_parts = _as_csc_parts(P, upper_from_dense=True)
    a_parts = _as_csc_parts(A, upper_from_dense=False)
    problem = _core.validate_problem(n, m, *p_parts, q, *a_parts, l, u)
    return ProblemHandle(problem, _core.settings_from_dict(settings))


def solve(P, q, A, l, u, settings: dict | None = None,
          warm_start=None) -> SolveOutcome:
    """Validate and solve in one call. See the module docstring for the
    accepted matrix forms; solver statuses come back as strings, while
    invalid inputs raise the core's validation exceptions."""
    handle = setup(P, q, A, l, u, settings)
    try:
        return handle.solve(warm_start=warm_start)
    finally:
        handle.release()
