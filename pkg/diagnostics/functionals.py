"""
Energy functionals monitored along a run

    φ_p(u)   = (1/p) ∫ (u+1)^p
    F_j(u)   = ∫_0^u s (s+1)^{p+j-3} ds,   integrated over the domain
"""
import numpy as np

from core.errors import ExponentDegenerate, PNotGreaterThanOne
from solver.grid import Field


def phi_functional(u: Field, p: float) -> float:
    if not p > 1:
        raise PNotGreaterThanOne(f"p>1 required, got {p}")
    return float(np.sum((u.values + 1.0) ** p) * u.grid.cell_measure / p)


def _power_integral(x: np.ndarray, b: float) -> np.ndarray:
    """∫_0^x (1+s)^b ds with the b = -1 branch"""
    if b == -1.0:
        return np.log1p(x)
    return np.expm1((b + 1.0) * np.log1p(x)) / (b + 1.0)


def corrector_density(values, j: float, p: float) -> np.ndarray:
    """
    Pointwise F_j(u) for u >= 0

    Uses s(s+1)^a = (s+1)^{a+1} - (s+1)^a with a = p+j-3; the logarithmic
    branch of the second term appears at p+j = 2.
    """
    exponent = p + j - 1.0
    if exponent <= 0:
        raise ExponentDegenerate(f"p+j-1 must be positive, got {exponent:g}")

    u = np.asarray(values, dtype=float)
    if np.any(u < 0):
        raise ValueError("corrector density is defined for u >= 0")

    a = p + j - 3.0
    return _power_integral(u, a + 1.0) - _power_integral(u, a)


def corrector_functional(u: Field, j: float, p: float) -> float:
    return float(np.sum(corrector_density(u.values, j, p)) * u.grid.cell_measure)
