"""
Error hierarchy for the chemotaxis toolkit
Every failure the toolkit reports derives from ChemotaxisError
"""
from typing import List, Optional, Sequence, Tuple


class ChemotaxisError(Exception):
    """Base class for all toolkit errors"""


# ============ MODEL ============
class NonPositiveParameter(ChemotaxisError, ValueError):
    pass


class EnvelopeViolated(ChemotaxisError, ValueError):
    """A tabulated production law leaves its declared envelope"""

    def __init__(self, s: float, value: float, lower: float, upper: float):
        self.s = s
        self.value = value
        self.lower = lower
        self.upper = upper
        super().__init__(
            f"envelope violated at s={s:g}: value {value:g} not in [{lower:g}, {upper:g}]"
        )


class NegativeArgument(ChemotaxisError, ValueError):
    pass


class RNotGreaterThanOne(ChemotaxisError, ValueError):
    pass


class ModelValidationError(ChemotaxisError, ValueError):
    """Collects every violated model invariant"""

    def __init__(self, issues: Sequence[Tuple[str, str]]):
        self.issues: List[Tuple[str, str]] = list(issues)
        super().__init__("; ".join(f"{field}: {message}" for field, message in self.issues))


# ============ THEORY ============
class InvalidHypothesisParameter(ChemotaxisError, ValueError):
    pass


class DegenerateDenominator(ChemotaxisError, ValueError):
    pass


class NotFoundWithinScan(ChemotaxisError):
    def __init__(self, violated: Sequence[str], p_max: float):
        self.violated = list(violated)
        self.p_max = p_max
        names = ", ".join(self.violated) or "none"
        super().__init__(f"no p̄ found up to p={p_max:g}; violated at the largest p: {names}")


# ============ SOLVER ============
class TooFewCells(ChemotaxisError, ValueError):
    pass


class NonPositiveEta(ChemotaxisError, ValueError):
    pass


class NegativeInitialData(ChemotaxisError, ValueError):
    pass


class FileFormatError(ChemotaxisError, ValueError):
    pass


class SolverDiverged(ChemotaxisError):
    pass


class NonFiniteField(ChemotaxisError, FloatingPointError):
    pass


class DtUnderflow(ChemotaxisError):
    def __init__(self, dt: float, dt_min: float):
        self.dt = dt
        self.dt_min = dt_min
        super().__init__(f"time step {dt:.3e} fell below dt_min={dt_min:.3e}")


# ============ DIAGNOSTICS ============
class PLessThanOne(ChemotaxisError, ValueError):
    pass


class PNotGreaterThanOne(ChemotaxisError, ValueError):
    pass


class ExponentDegenerate(ChemotaxisError, ValueError):
    pass


class EmptySeries(ChemotaxisError, ValueError):
    pass


# ============ CONFIG / CLI ============
class ConfigError(ChemotaxisError, ValueError):
    """Problem in a run-config file, optionally tied to a line"""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


class UnknownKey(ConfigError):
    pass


class MissingSection(ConfigError):
    pass


class ConfigTypeError(ConfigError, TypeError):
    pass


class BudgetExceeded(ChemotaxisError):
    def __init__(self, requested: int, budget: int):
        self.requested = requested
        self.budget = budget
        super().__init__(f"sweep needs {requested} runs, budget is {budget}")
