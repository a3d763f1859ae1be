"""QP solver built on ADMM with per-constraint exponential penalty updates.

Public API: validate_problem / QpProblem to build problems, Settings for
the knobs, solve() to run, and the benchmark generators.
"""

from .generators import (GeneratorError, GeneratorSpec, gen_huber, gen_lasso,
                         gen_mpc, gen_random_qp, solve_dare)
from .kkt import KktMatrix, assemble_kkt, kkt_residual_inf_norm, update_kkt_penalties
from .ldl import (FactorizationFailed, LdlFactors, SymbolicFactorization,
                  ldl_solve, numeric_factorize, symbolic_factorize)
from .ordering import mindeg_order, natural_order
from .problem import (BoundsError, DimensionMismatch, NonFiniteData, QpProblem,
                      problem_from_parts, validate_problem)
from .results import EXIT_CODES, SolveResult, SolveStatus, TraceRecord
from .settings import Settings, default_settings_dict, settings_from_dict
from .solver import (PenaltyState, SolverState, check_dual_infeasibility,
                     check_primal_infeasibility, compute_residuals, init_state,
                     iterate_once, project_box, solve, update_penalties,
                     update_stability_bound)
from .sparse import (MalformedSparse, SparseMatrix, csc_from_dense,
                     csc_from_triplets, infinity_norm, spmv, spmv_sym_upper,
                     spmv_transpose, transpose)

__version__ = "0.1.0"

__all__ = [
    "BoundsError", "DimensionMismatch", "EXIT_CODES", "FactorizationFailed",
    "GeneratorError", "GeneratorSpec", "KktMatrix", "LdlFactors",
    "MalformedSparse", "NonFiniteData", "PenaltyState", "QpProblem",
    "Settings", "SolveResult", "SolveStatus", "SolverState", "SparseMatrix",
    "SymbolicFactorization", "TraceRecord", "assemble_kkt",
    "check_dual_infeasibility", "check_primal_infeasibility",
    "compute_residuals", "csc_from_dense", "csc_from_triplets",
    "default_settings_dict", "gen_huber", "gen_lasso", "gen_mpc",
    "gen_random_qp", "infinity_norm", "init_state", "iterate_once",
    "kkt_residual_inf_norm", "ldl_solve", "mindeg_order", "natural_order",
    "numeric_factorize", "problem_from_parts", "project_box", "solve",
    "solve_dare", "settings_from_dict", "spmv", "spmv_sym_upper",
    "spmv_transpose", "symbolic_factorize", "transpose",
    "update_kkt_penalties", "update_penalties", "update_stability_bound",
    "validate_problem",
]
