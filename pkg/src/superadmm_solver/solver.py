"""The penalty-adaptive ADMM iteration loop.

Each iteration solves the quasidefinite KKT system for (x, nu), recovers
Ax from nu without an extra matrix-vector product, projects onto the
box, updates the duals, and then adapts the per-constraint penalties:
rows sitting exactly on a bound get their penalty multiplied by alpha,
all others divided by alpha, clamped to [1/b, b]. The bound b shrinks by
tau whenever the linear-solve error reaches the primal residual, which
caps the attainable accuracy; b < 1 means no better solution is possible
with the current parameters.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .kkt import KktMatrix, assemble_kkt, kkt_residual, update_kkt_penalties
from .ldl import (FactorizationFailed, LdlFactors, SymbolicFactorization,
                  ldl_solve, numeric_factorize, symbolic_factorize)
from .ordering import mindeg_order, natural_order
from .problem import QpProblem
from .results import SolveResult, SolveStatus, TraceRecord
from .settings import Settings
from .sparse import infinity_norm, spmv, spmv_sym_upper, spmv_transpose

#: Relative band applied to the infeasibility certificate conditions.
INFEAS_TOL = 1e-9

#: A linear-solve residual above this (relative to the rhs) triggers one
#: step of iterative refinement.
REFINE_THRESHOLD = 1e-10


@dataclass
class PenaltyState:
    """Per-constraint penalties R_diag, their bound b, and the growth factor."""

    R_diag: np.ndarray
    b: float
    alpha: float


@dataclass
class SolverState:
    x: np.ndarray
    z: np.ndarray
    y: np.ndarray
    nu: np.ndarray
    z_tilde: np.ndarray
    penalty: PenaltyState
    kkt: KktMatrix
    sym: SymbolicFactorization
    factors: Optional[LdlFactors] = None
    r_prim: float = np.inf
    r_dual: float = np.inf
    eps_solve: float = 0.0
    k: int = 0
    x_prev: np.ndarray = field(default_factory=lambda: np.empty(0))
    y_prev: np.ndarray = field(default_factory=lambda: np.empty(0))


def project_box(v: np.ndarray, l: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Elementwise clip onto [l, u]; clamped entries equal the bound bitwise."""
    return np.clip(v, l, u)


def compute_residuals(problem: QpProblem, x: np.ndarray, z: np.ndarray,
                      y: np.ndarray) -> tuple[float, float]:
    """(||Ax - z||_inf, ||Px + q + A'y||_inf), P applied symmetrically."""
    r_prim = infinity_norm(spmv(problem.A, x) - z)
    r_dual = infinity_norm(spmv_sym_upper(problem.P, x) + problem.q
                           + spmv_transpose(problem.A, y))
    return r_prim, r_dual


def update_penalties(penalty: PenaltyState, z_new: np.ndarray, l: np.ndarray,
                     u: np.ndarray, b_new: float) -> PenaltyState:
    """Grow penalties of rows at a bound, shrink the rest, clamp to [1/b, b].

    Activity is bitwise equality with a bound, which project_box
    guarantees for clamped entries.
    """
    active = (z_new == l) | (z_new == u)
    r = penalty.R_diag
    grown = np.minimum(b_new, penalty.alpha * r)
    shrunk = np.maximum(1.0 / b_new, r / penalty.alpha)
    return PenaltyState(R_diag=np.where(active, grown, shrunk), b=b_new,
                        alpha=penalty.alpha)


def update_stability_bound(b: float, eps_solve: float, r_prim: float,
                           tau: float) -> float:
    """b shrinks by tau once the solve error reaches the primal residual."""
    return tau * b if eps_solve >= r_prim else b


def _support(bound: np.ndarray, d: np.ndarray) -> float:
    # bound' d with the 0 * inf = 0 convention for zero entries of d.
    mask = d != 0.0
    return float(bound[mask] @ d[mask]) if np.any(mask) else 0.0


def check_primal_infeasibility(delta_y: np.ndarray, problem: QpProblem,
                               tol: float = INFEAS_TOL) -> bool:
    """delta_y certifies that no point satisfies l <= Ax <= u."""
    norm = infinity_norm(delta_y)
    if norm == 0.0:
        return False
    band = tol * norm
    if infinity_norm(spmv_transpose(problem.A, delta_y)) > band:
        return False
    support = (_support(problem.u, np.maximum(delta_y, 0.0))
               + _support(problem.l, np.minimum(delta_y, 0.0)))
    return support < -band


def check_dual_infeasibility(delta_x: np.ndarray, problem: QpProblem,
                             tol: float = INFEAS_TOL,
                             sigma: float = 1e-6) -> bool:
    """delta_x certifies an unbounded descent direction.

    The proximal weight sigma floors how well the iteration can align
    delta_x with the curvature null space (||P dx|| and the A dx terms
    plateau near sigma * ||dx||), so the band is at least 10*sigma.
    """
    norm = infinity_norm(delta_x)
    if norm == 0.0:
        return False
    band = max(tol, 10.0 * sigma) * norm
    if float(problem.q @ delta_x) >= -band:
        return False
    if infinity_norm(spmv_sym_upper(problem.P, delta_x)) > band:
        return False
    ad = spmv(problem.A, delta_x)
    l_fin = np.isfinite(problem.l)
    u_fin = np.isfinite(problem.u)
    both = l_fin & u_fin
    if np.any(np.abs(ad[both]) > band):
        return False
    up_open = l_fin & ~u_fin
    if np.any(ad[up_open] < -band):
        return False
    low_open = ~l_fin & u_fin
    if np.any(ad[low_open] > band):
        return False
    return True


def init_state(problem: QpProblem, settings: Settings,
               warm_start: Optional[tuple] = None) -> SolverState:
    """Assemble the KKT system, order it, run the one-time symbolic analysis."""
    n, m = problem.n, problem.m
    if warm_start is not None:
        x0 = np.asarray(warm_start[0], dtype=np.float64).copy()
        y0 = np.asarray(warm_start[1], dtype=np.float64).copy()
        if x0.shape != (n,) or y0.shape != (m,):
            raise ValueError("warm start shapes do not match the problem")
    else:
        x0 = np.zeros(n)
        y0 = np.zeros(m)

    penalty = PenaltyState(R_diag=np.full(m, float(settings.rho0)),
                           b=float(settings.b0), alpha=float(settings.alpha))
    kkt = assemble_kkt(problem.P, problem.A, settings.sigma, penalty.R_diag)
    if settings.ordering == "amd":
        perm = mindeg_order(kkt.matrix)
    else:
        perm = natural_order(kkt.size)
    sym = symbolic_factorize(kkt.matrix, perm)

    return SolverState(x=x0, z=spmv(problem.A, x0), y=y0,
                       nu=np.zeros(m), z_tilde=np.zeros(m),
                       penalty=penalty, kkt=kkt, sym=sym,
                       x_prev=x0.copy(), y_prev=y0.copy())


def iterate_once(state: SolverState, problem: QpProblem,
                 settings: Settings) -> SolverState:
    """One full iteration: solve, project, dual update, residuals, penalty
    and stability-bound updates. Mutates and returns ``state``."""
    n, m = problem.n, problem.m
    r_diag = state.penalty.R_diag
    r_inv = 1.0 / r_diag

    update_kkt_penalties(state.kkt, r_diag)
    state.factors = numeric_factorize(state.kkt, state.sym)

    rhs = np.concatenate((settings.sigma * state.x - problem.q,
                          state.z - r_inv * state.y))
    sol = ldl_solve(state.factors, rhs)
    resid = kkt_residual(state.kkt, sol, rhs)
    # eps measures raw factorization quality and feeds the b update;
    # refinement improves the iterate but not the reported eps.
    eps_solve = infinity_norm(resid)
    if eps_solve > REFINE_THRESHOLD * infinity_norm(rhs):
        sol = sol + ldl_solve(state.factors, resid)

    x_new = sol[:n]
    nu_new = sol[n:]
    z_tilde = state.z + r_inv * (nu_new - state.y)
    z_new = project_box(z_tilde + r_inv * state.y, problem.l, problem.u)
    y_new = state.y + r_diag * (z_tilde - z_new)

    r_prim = infinity_norm(z_tilde - z_new)
    r_dual = infinity_norm(spmv_sym_upper(problem.P, x_new) + problem.q
                           + spmv_transpose(problem.A, y_new))

    b_new = update_stability_bound(state.penalty.b, eps_solve, r_prim, settings.tau)
    state.x_prev = state.x
    state.y_prev = state.y
    state.x = x_new
    state.y = y_new
    state.z = z_new
    state.z_tilde = z_tilde
    state.nu = nu_new
    state.penalty = update_penalties(state.penalty, z_new, problem.l, problem.u, b_new)
    state.r_prim = r_prim
    state.r_dual = r_dual
    state.eps_solve = eps_solve
    state.k += 1
    return state


def solve(problem: QpProblem, settings: Optional[Settings] = None,
          warm_start: Optional[tuple] = None,
          record_trace: bool = False) -> SolveResult:
    """Run the full algorithm on a validated problem.

    Terminates SOLVED when both residuals reach eps_abs,
    SOLVED_INACCURATE when the penalty bound b falls below 1 first (the
    best iterates seen are returned in that case), or with the
    appropriate infeasibility/limit/error status.
    """
    settings = settings if settings is not None else Settings()
    t0 = time.perf_counter()
    state = init_state(problem, settings, warm_start)
    trace: Optional[list[TraceRecord]] = [] if record_trace else None

    status = SolveStatus.MAX_ITERATIONS
    best_score = np.inf
    best: Optional[tuple] = None
    x_out = y_out = None

    for k in range(settings.max_iter):
        try:
            iterate_once(state, problem, settings)
        except FactorizationFailed:
            status = SolveStatus.NUMERICAL_ERROR
            break

        if trace is not None:
            trace.append(TraceRecord(k, state.r_prim, state.r_dual,
                                     state.eps_solve, state.penalty.b,
                                     time.perf_counter() - t0))

        score = max(state.r_prim, state.r_dual)
        if score < best_score:
            best_score = score
            best = (state.x.copy(), state.y.copy(), state.r_prim, state.r_dual)

        if state.r_prim <= settings.eps_abs and state.r_dual <= settings.eps_abs:
            status = SolveStatus.SOLVED
            break
        if state.penalty.b < 1.0:
            status = SolveStatus.SOLVED_INACCURATE
            break

        # Certificates are only meaningful while the iteration is not
        # converging: an infeasible or unbounded problem keeps at least one
        # residual bounded away from zero, whereas near convergence the
        # deltas are noise and can false-fire on ill-scaled problems.
        converging = max(state.r_prim, state.r_dual) <= \
            max(100.0 * settings.eps_abs, 1e-9)
        if state.k % settings.infeas_check_period == 0 and not converging:
            delta_y = state.y - state.y_prev
            if check_primal_infeasibility(delta_y, problem):
                status = SolveStatus.PRIMAL_INFEASIBLE
                y_out = delta_y
                break
            delta_x = state.x - state.x_prev
            if check_dual_infeasibility(delta_x, problem, sigma=settings.sigma):
                status = SolveStatus.DUAL_INFEASIBLE
                x_out = delta_x
                break

        if settings.time_limit is not None and \
                time.perf_counter() - t0 > settings.time_limit:
            status = SolveStatus.TIME_LIMIT
            break

    x, y = state.x, state.y
    r_prim, r_dual = state.r_prim, state.r_dual
    if status is SolveStatus.SOLVED_INACCURATE and best is not None:
        x, y, r_prim, r_dual = best
    if x_out is not None:
        x = x_out
    if y_out is not None:
        y = y_out

    return SolveResult(status=status, x=x, y=y, iterations=state.k,
                       r_prim=float(r_prim), r_dual=float(r_dual),
                       runtime=time.perf_counter() - t0, trace=trace)
