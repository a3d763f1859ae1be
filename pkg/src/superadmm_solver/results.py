"""Solve status codes, per-iteration trace records, and the result object."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np


class SolveStatus(enum.Enum):
    SOLVED = "solved"
    SOLVED_INACCURATE = "solved_inaccurate"
    PRIMAL_INFEASIBLE = "primal_infeasible"
    DUAL_INFEASIBLE = "dual_infeasible"
    MAX_ITERATIONS = "max_iterations"
    TIME_LIMIT = "time_limit"
    NUMERICAL_ERROR = "numerical_error"


#: Process exit codes used by the CLI for each terminal status.
EXIT_CODES = {
    SolveStatus.SOLVED: 0,
    SolveStatus.SOLVED_INACCURATE: 1,
    SolveStatus.PRIMAL_INFEASIBLE: 2,
    SolveStatus.DUAL_INFEASIBLE: 2,
    SolveStatus.MAX_ITERATIONS: 3,
    SolveStatus.TIME_LIMIT: 3,
    SolveStatus.NUMERICAL_ERROR: 4,
}


class TraceRecord(NamedTuple):
    k: int
    r_prim: float
    r_dual: float
    eps: float
    b: float
    time_s: float


@dataclass
class SolveResult:
    """Final iterates plus termination bookkeeping.

    On PRIMAL_INFEASIBLE, ``y`` holds the certificate direction delta-y;
    on DUAL_INFEASIBLE, ``x`` holds the certificate direction delta-x.
    """

    status: SolveStatus
    x: np.ndarray
    y: np.ndarray
    iterations: int
    r_prim: float
    r_dual: float
    runtime: float
    trace: Optional[list[TraceRecord]] = None
