import os
from pathlib import Path
from typing import Optional
from dotenv import load_dotenv

# Load environment variables
load_dotenv()


def _env_float(name: str, default: str) -> float:
    raw = os.getenv(name, default)
    try:
        return float(raw)
    except ValueError:
        raise ValueError(f"{name} must be a number, got {raw!r}") from None


class Config:
    """Configuration manager for the chemotaxis toolkit"""

    # ============ PARALLELISM ============
    # Overrides --jobs when set
    JOBS = os.getenv("CHEMO_JOBS")

    # ============ TIME STEPPING ============
    DEFAULT_CFL = 0.4
    DT_MIN = _env_float("CHEMO_DT_MIN", "1e-12")
    RECORD_SAMPLES = 500  # record_interval defaults to T / RECORD_SAMPLES

    # ============ LINEAR SOLVER ============
    SOLVER_TOL = _env_float("CHEMO_SOLVER_TOL", "1e-10")
    SOLVER_MAXITER_FACTOR = 10  # iteration cap = factor * number of cells

    # ============ BLOW-UP DETECTION ============
    BLOWUP_THRESHOLD = _env_float("CHEMO_BLOWUP_THRESHOLD", "1e6")
    GROWTH_FACTOR = 10.0
    TAIL_FRACTION = 0.1
    PLATEAU_TOL = 1e-3

    # ============ p̄ SEARCH ============
    PBAR_STEP = 0.01
    PBAR_MAX = 1e4
    PBAR_WINDOW = 50.0
    PBAR_SAMPLES = 50

    # ============ SWEEPS ============
    SWEEP_BUDGET = os.getenv("CHEMO_SWEEP_BUDGET", "1000")

    # ============ PATHS ============
    BASE_DIR = Path(__file__).parent.parent
    OUTPUT_DIR = Path(os.getenv("CHEMO_OUTPUT_DIR", "output"))

    # ============ LOGGING ============
    LOG_LEVEL = os.getenv("CHEMO_LOG_LEVEL", "INFO").upper()
    LOG_FILE = os.getenv("CHEMO_LOG_FILE")

    @classmethod
    def validate(cls):
        """Validate configuration"""
        if cls.JOBS is not None:
            if not cls.JOBS.isdigit() or int(cls.JOBS) < 1:
                raise ValueError(f"CHEMO_JOBS must be a positive integer, got {cls.JOBS!r}")

        if not cls.SWEEP_BUDGET.isdigit() or int(cls.SWEEP_BUDGET) < 1:
            raise ValueError(
                f"CHEMO_SWEEP_BUDGET must be a positive integer, got {cls.SWEEP_BUDGET!r}"
            )

        for name in ("DT_MIN", "SOLVER_TOL", "BLOWUP_THRESHOLD"):
            if getattr(cls, name) <= 0:
                raise ValueError(f"CHEMO_{name} must be positive")

        if cls.LOG_LEVEL not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            raise ValueError(f"CHEMO_LOG_LEVEL {cls.LOG_LEVEL!r} is not a logging level")

        return True

    @classmethod
    def get_jobs(cls, requested: Optional[int] = None) -> int:
        """Worker count: CHEMO_JOBS first, then --jobs, then available parallelism"""
        if cls.JOBS is not None:
            return int(cls.JOBS)
        if requested:
            return max(1, int(requested))
        return os.cpu_count() or 1

    @classmethod
    def get_sweep_budget(cls) -> int:
        return int(cls.SWEEP_BUDGET)


# Validate on import
Config.validate()
