"""Solver hyperparameters and their validation."""

from __future__ import annotations

from dataclasses import dataclass, fields


@dataclass(frozen=True)
class Settings:
    """All solver knobs.

    alpha      penalty growth/shrink factor per iteration (>= 1; 1 freezes
               the penalties, giving plain static-penalty ADMM)
    sigma      proximal regularization weight (> 0)
    tau        shrink factor applied to the penalty bound b when the linear
               solve error reaches the primal residual (0 < tau < 1)
    rho0       initial per-constraint penalty
    b0         initial penalty bound; penalties live in [1/b, b]
    eps_abs    absolute termination tolerance on both residuals (>= 0;
               0 means run until the accuracy ceiling b < 1 or a limit)
    max_iter   iteration cap
    time_limit wall-clock cap in seconds, or None
    infeas_check_period  iterations between infeasibility certificate checks
    ordering   'amd' (minimum degree) or 'natural' for the KKT factorization
    """

    alpha: float = 500.0
    sigma: float = 1e-6
    tau: float = 0.5
    rho0: float = 0.155
    b0: float = 1e8
    eps_abs: float = 1e-8
    max_iter: int = 4000
    time_limit: float | None = None
    infeas_check_period: int = 10
    ordering: str = "amd"

    def __post_init__(self):
        if not self.alpha >= 1.0:
            raise ValueError(f"alpha must be >= 1, got {self.alpha}")
        if not self.sigma > 0.0:
            raise ValueError(f"sigma must be > 0, got {self.sigma}")
        if not 0.0 < self.tau < 1.0:
            raise ValueError(f"tau must be in (0, 1), got {self.tau}")
        if not self.b0 > 1.0:
            raise ValueError(f"b0 must be > 1, got {self.b0}")
        if not (1.0 / self.b0 <= self.rho0 <= self.b0):
            raise ValueError(f"rho0 must lie in [1/b0, b0], got {self.rho0}")
        if not self.eps_abs >= 0.0:
            raise ValueError(f"eps_abs must be >= 0, got {self.eps_abs}")
        if self.max_iter < 1:
            raise ValueError(f"max_iter must be >= 1, got {self.max_iter}")
        if self.time_limit is not None and not self.time_limit > 0.0:
            raise ValueError(f"time_limit must be positive or None, got {self.time_limit}")
        if self.infeas_check_period < 1:
            raise ValueError(f"infeas_check_period must be >= 1, got {self.infeas_check_period}")
        if self.ordering not in ("amd", "natural"):
            raise ValueError(f"ordering must be 'amd' or 'natural', got {self.ordering!r}")


def settings_from_dict(overrides: dict | None) -> Settings:
    """Build Settings from a string-keyed map; unknown keys are rejected."""
    if not overrides:
        return Settings()
    known = {f.name for f in fields(Settings)}
    unknown = set(overrides) - known
    if unknown:
        raise ValueError(f"unknown settings: {sorted(unknown)}")
    return Settings(**overrides)


def default_settings_dict() -> dict:
    """Defaults as a plain dict (the map accepted by settings_from_dict)."""
    s = Settings()
    return {f.name: getattr(s, f.name) for f in fields(Settings)}
