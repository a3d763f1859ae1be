"""Command-line front end: solve, generate, bench.

Exit codes for solve: 0 solved, 1 solved inaccurately, 2 infeasible,
3 iteration/time limit, 4 usage or runtime error. generate and bench
exit 0 on success and 4 on error. SUPERADMM_THREADS caps the bench
worker pool.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from . import fileio
from .generators import GeneratorError, GeneratorSpec
from .results import EXIT_CODES
from .settings import Settings
from .solver import solve

USAGE_ERROR = 4


def _add_solver_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--eps-abs", type=float, default=1e-8)
    p.add_argument("--alpha", type=float, default=500.0)
    p.add_argument("--sigma", type=float, default=1e-6)
    p.add_argument("--tau", type=float, default=0.5)
    p.add_argument("--rho0", type=float, default=0.155)
    p.add_argument("--b0", type=float, default=1e8)
    p.add_argument("--max-iter", type=int, default=4000)
    p.add_argument("--time-limit", type=float, default=None)
    p.add_argument("--ordering", choices=("amd", "natural"), default="amd")


def _settings_from_args(args) -> Settings:
    return Settings(alpha=args.alpha, sigma=args.sigma, tau=args.tau,
                    rho0=args.rho0, b0=args.b0, eps_abs=args.eps_abs,
                    max_iter=args.max_iter, time_limit=args.time_limit,
                    ordering=args.ordering)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="superadmm",
        description="QP solver with per-constraint exponential penalty adaptation")
    sub = parser.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("solve", help="solve a problem file")
    ps.add_argument("path")
    _add_solver_flags(ps)
    ps.add_argument("--trace", metavar="PATH", help="write per-iteration CSV trace")
    ps.add_argument("--warm-start", metavar="PATH",
                    help="solution file supplying x0, y0")
    ps.add_argument("--solution", metavar="PATH", help="write the solution file")

    pg = sub.add_parser("generate", help="generate a benchmark problem file")
    pg.add_argument("family", choices=("mpc", "lasso", "huber", "random"))
    pg.add_argument("--nx", type=int, help="mpc state dimension (even)")
    pg.add_argument("--horizon", type=int, default=10, help="mpc horizon")
    pg.add_argument("--n", type=int, help="lasso/huber/random variable count")
    pg.add_argument("--m", type=int, help="random constraint count")
    pg.add_argument("--seed", type=int, default=0)
    pg.add_argument("--out", required=True)

    pb = sub.add_parser("bench", help="sweep a family over sizes and seeds")
    pb.add_argument("family", choices=("mpc", "lasso", "huber", "random"))
    pb.add_argument("--n", type=int, nargs="+", help="sizes for lasso/huber/random")
    pb.add_argument("--m", type=int, nargs="+", help="constraint counts (random)")
    pb.add_argument("--nx", type=int, nargs="+", help="state dims (mpc)")
    pb.add_argument("--horizon", type=int, nargs="+", default=[10],
                    help="horizons (mpc)")
    pb.add_argument("--seeds", type=int, default=5,
                    help="number of seeds per size (0..k-1)")
    pb.add_argument("--baseline", action="store_true",
                    help="also run the alpha=1 static-penalty baseline")
    _add_solver_flags(pb)
    pb.add_argument("--out-dir", required=True)
    return parser


def _specs_for_bench(args) -> list[GeneratorSpec]:
    family = args.family
    specs = []
    if family == "mpc":
        nxs = args.nx or []
        hors = args.horizon
        if not nxs:
            raise ValueError("mpc bench needs --nx")
        if len(nxs) > 1 and len(hors) > 1:
            raise ValueError("sweep either --nx or --horizon, not both")
        if len(hors) == 1:
            cells = [(nx, hors[0]) for nx in nxs]
        else:
            cells = [(nxs[0], h) for h in hors]
        for nx, h in cells:
            specs.append(GeneratorSpec("mpc", nx=nx, horizon=h))
    elif family in ("lasso", "huber"):
        if not args.n:
            raise ValueError(f"{family} bench needs --n")
        specs = [GeneratorSpec(family, n=n) for n in args.n]
    else:
        if not args.n or not args.m:
            raise ValueError("random bench needs --n and --m")
        ms = args.m if len(args.m) > 1 else args.m * len(args.n)
        if len(ms) != len(args.n):
            raise ValueError("--m must be a single value or match --n")
        specs = [GeneratorSpec("random", n=n, m=m) for n, m in zip(args.n, ms)]

    for key in ("n", "m", "nx"):
        vals = getattr(args, key, None)
        if vals and list(vals) != sorted(vals):
            raise ValueError(f"--{key} sizes must be monotone non-decreasing")
    return specs


def _size_label(spec: GeneratorSpec) -> str:
    if spec.family == "mpc":
        return f"nx={spec.nx},N={spec.horizon}"
    if spec.family == "random":
        return f"n={spec.n},m={spec.m}"
    return f"n={spec.n}"


def _bench_cell(spec: GeneratorSpec, seed: int, settings: Settings, label: str):
    try:
        problem = GeneratorSpec(**{**spec.__dict__, "seed": seed}).generate()
        res = solve(problem, settings)
        return (spec.family, _size_label(spec), seed, label, res.status.value,
                res.iterations, f"{res.runtime!r}", f"{res.r_prim!r}",
                f"{res.r_dual!r}")
    except Exception as exc:  # record, don't abort the sweep
        return (spec.family, _size_label(spec), seed, label, f"error:{exc}",
                "", "", "", "")


def cmd_solve(args) -> int:
    try:
        problem = fileio.load_problem(args.path)
        warm = fileio.load_warm_start(args.warm_start) if args.warm_start else None
        settings = _settings_from_args(args)
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR

    res = solve(problem, settings, warm_start=warm,
                record_trace=args.trace is not None)
    print(f"status:     {res.status.value}")
    print(f"iterations: {res.iterations}")
    print(f"r_prim:     {res.r_prim:.3e}")
    print(f"r_dual:     {res.r_dual:.3e}")
    print(f"runtime:    {res.runtime:.6f} s")
    if problem.n <= 20:
        print(f"x: {res.x.tolist()}")
    if args.trace:
        fileio.save_trace(res.trace, args.trace)
    if args.solution:
        fileio.save_solution(res, args.solution)
    return EXIT_CODES[res.status]


def cmd_generate(args) -> int:
    spec = GeneratorSpec(args.family, seed=args.seed, nx=args.nx,
                         horizon=args.horizon, n=args.n, m=args.m)
    try:
        problem = spec.generate()
        fileio.save_problem(problem, args.out)
    except (GeneratorError, TypeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    print(f"wrote {args.out}: n={problem.n} m={problem.m} "
          f"nnz(P)={problem.P.nnz} nnz(A)={problem.A.nnz}")
    return 0


def cmd_bench(args) -> int:
    try:
        specs = _specs_for_bench(args)
        settings = _settings_from_args(args)
        os.makedirs(args.out_dir, exist_ok=True)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR

    jobs = []
    for spec in specs:
        for seed in range(args.seeds):
            jobs.append((spec, seed, settings, "superadmm"))
            if args.baseline:
                base = Settings(**{**settings.__dict__, "alpha": 1.0})
                jobs.append((spec, seed, base, "alpha1"))

    threads = int(os.environ.get("SUPERADMM_THREADS", "1"))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(lambda j: _bench_cell(*j), jobs))
    else:
        rows = [_bench_cell(*j) for j in jobs]

    out = os.path.join(args.out_dir, f"bench_{args.family}.csv")
    with open(out, "w") as fh:
        fh.write("family,size,seed,solver,status,iterations,runtime,r_prim,r_dual\n")
        for row in rows:
            fh.write(",".join(str(c) for c in row) + "\n")
    print(f"wrote {out} ({len(rows)} rows)")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE_ERROR if exc.code not in (0, None) else 0
    if args.command == "solve":
        return cmd_solve(args)
    if args.command == "generate":
        return cmd_generate(args)
    return cmd_bench(args)


if __name__ == "__main__":
    sys.exit(main())
