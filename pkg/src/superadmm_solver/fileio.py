"""On-disk formats: problem files, solution files, iteration traces.

Problems are JSON documents with keys n, m, P {colptr, rowidx, values},
q, A {colptr, rowidx, values}, l, u; P holds the upper triangle only.
Bound entries may be the strings "inf"/"-inf", or numbers (magnitude
>= 1e30 also means infinite). Floats are serialized with Python's
shortest-repr rule, so save/load round-trips are bit exact.

Solutions are JSON with a status block plus the x and y arrays; the same
document doubles as warm-start input. Traces are CSV with the header
k,r_prim,r_dual,eps,b,time_s.
"""

from __future__ import annotations

import json
import math
from typing import TextIO

import numpy as np

from .problem import QpProblem, validate_problem
from .results import SolveResult
from .sparse import SparseMatrix


def _bound_out(v: float):
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return v


def _bound_in(v) -> float:
    if isinstance(v, str):
        if v == "inf":
            return math.inf
        if v == "-inf":
            return -math.inf
        raise ValueError(f"bad bound string {v!r}")
    return float(v)


def _matrix_out(m: SparseMatrix) -> dict:
    return {"colptr": m.colptr.tolist(), "rowidx": m.rowidx.tolist(),
            "values": m.values.tolist()}


def save_problem(problem: QpProblem, path: str) -> None:
    doc = {
        "n": problem.n,
        "m": problem.m,
        "P": _matrix_out(problem.P),
        "q": problem.q.tolist(),
        "A": _matrix_out(problem.A),
        "l": [_bound_out(v) for v in problem.l],
        "u": [_bound_out(v) for v in problem.u],
    }
    with open(path, "w") as fh:
        json.dump(doc, fh, allow_nan=False)
        fh.write("\n")


def load_problem(path: str) -> QpProblem:
    with open(path) as fh:
        doc = json.load(fh)
    for key in ("n", "m", "P", "q", "A", "l", "u"):
        if key not in doc:
            raise ValueError(f"problem file missing key {key!r}")
    p, a = doc["P"], doc["A"]
    return validate_problem(
        doc["n"], doc["m"],
        p["colptr"], p["rowidx"], p["values"],
        doc["q"],
        a["colptr"], a["rowidx"], a["values"],
        [_bound_in(v) for v in doc["l"]],
        [_bound_in(v) for v in doc["u"]],
    )


def save_solution(result: SolveResult, path: str) -> None:
    doc = {
        "status": result.status.value,
        "iterations": result.iterations,
        "r_prim": result.r_prim,
        "r_dual": result.r_dual,
        "runtime": result.runtime,
        "x": result.x.tolist(),
        "y": result.y.tolist(),
    }
    with open(path, "w") as fh:
        json.dump(doc, fh, allow_nan=False)
        fh.write("\n")


def load_warm_start(path: str) -> tuple[np.ndarray, np.ndarray]:
    with open(path) as fh:
        doc = json.load(fh)
    return (np.asarray(doc["x"], dtype=np.float64),
            np.asarray(doc["y"], dtype=np.float64))


def write_trace(trace, fh: TextIO) -> None:
    fh.write("k,r_prim,r_dual,eps,b,time_s\n")
    for rec in trace:
        fh.write(f"{rec.k},{rec.r_prim!r},{rec.r_dual!r},{rec.eps!r},"
                 f"{rec.b!r},{rec.time_s!r}\n")


def save_trace(trace, path: str) -> None:
    with open(path, "w") as fh:
        write_trace(trace, fh)
