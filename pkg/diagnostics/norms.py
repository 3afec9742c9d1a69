"""
Midpoint-quadrature norms of grid fields
"""
import numpy as np

from core.errors import PLessThanOne
from solver.grid import Field


def total_mass(field: Field) -> float:
    return float(np.sum(field.values) * field.grid.cell_measure)


def lp_norm(field: Field, p: float) -> float:
    """(Σ |u_i|^p · cell measure)^{1/p}"""
    if not p >= 1:
        raise PLessThanOne(f"p must be at least 1, got {p}")
    if np.isinf(p):
        return sup_norm(field)
    return float((np.sum(np.abs(field.values) ** p) * field.grid.cell_measure) ** (1.0 / p))


def sup_norm(field: Field) -> float:
    return float(np.max(np.abs(field.values)))
