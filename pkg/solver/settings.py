"""
Numerical settings shared by the elliptic solves and the time stepper
"""
from dataclasses import dataclass
from typing import Optional

from config.config import Config


@dataclass(frozen=True)
class SolverSettings:
    cfl: float = Config.DEFAULT_CFL
    dt_min: float = Config.DT_MIN
    dt_max: Optional[float] = None
    blowup_threshold: float = Config.BLOWUP_THRESHOLD
    tolerance: float = Config.SOLVER_TOL
    maxiter_factor: int = Config.SOLVER_MAXITER_FACTOR

    def __post_init__(self):
        if not 0 < self.cfl <= 1:
            raise ValueError(f"cfl must lie in (0, 1], got {self.cfl}")
        if not self.dt_min > 0:
            raise ValueError(f"dt_min must be positive, got {self.dt_min}")
        if self.dt_max is not None and self.dt_max < self.dt_min:
            raise ValueError(f"dt_max={self.dt_max} is below dt_min={self.dt_min}")
        if not self.blowup_threshold > 0:
            raise ValueError("blowup_threshold must be positive")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
