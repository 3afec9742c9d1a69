"""
Finite-volume face fluxes for the cell equation

    u_t = ∇·( D(u)∇u + a u ),   D = (u+1)^{m1-1},
    a = -χ(u+1)^{m2-1}∇v + ξ(u+1)^{m3-1}∇w

Face diffusivity and sensitivities use the arithmetic face average of u; the
transported u is taken from the upwind cell. Boundary faces carry zero flux.
"""
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from core.errors import DtUnderflow, NonFiniteField
from model.problem import ModelSpec
from solver.grid import Grid
from solver.settings import SolverSettings


@dataclass(frozen=True)
class FaceFluxes:
    """Per-axis face fluxes, boundary faces included (zeros)"""

    grid: Grid
    fluxes: Tuple[np.ndarray, ...]
    velocities: Tuple[np.ndarray, ...]
    d_max: float
    a_max: float


def _slices(axis: int, ndim: int):
    left = [slice(None)] * ndim
    right = [slice(None)] * ndim
    left[axis] = slice(None, -1)
    right[axis] = slice(1, None)
    return tuple(left), tuple(right)


def compute_fluxes(state, model: ModelSpec) -> FaceFluxes:
    """Face fluxes of u for the current state"""
    grid = state.u.grid
    u = state.u.as_array()
    v = state.v.as_array()
    w = state.w.as_array()
    ndim = grid.dimension

    fluxes = []
    velocities = []
    a_max = 0.0
    for axis, h in enumerate(grid.spacing):
        left, right = _slices(axis, ndim)
        u_l, u_r = u[left], u[right]
        base = 0.5 * (u_l + u_r) + 1.0

        diffusivity = base ** (model.m1 - 1.0)
        velocity = (
            -model.chi * base ** (model.m2 - 1.0) * (v[right] - v[left]) / h
            + model.xi * base ** (model.m3 - 1.0) * (w[right] - w[left]) / h
        )
        upwind = np.where(velocity < 0, u_l, u_r)
        flux = diffusivity * (u_r - u_l) / h + velocity * upwind

        pad = [(0, 0)] * ndim
        pad[axis] = (1, 1)
        fluxes.append(np.pad(flux, pad))
        velocities.append(velocity)
        if velocity.size:
            a_max = max(a_max, float(np.max(np.abs(velocity))))

    d_max = float(np.max((u + 1.0) ** (model.m1 - 1.0)))
    if not (np.isfinite(a_max) and np.isfinite(d_max)) or not all(np.all(np.isfinite(f)) for f in fluxes):
        raise NonFiniteField("face fluxes are not finite")

    return FaceFluxes(grid, tuple(fluxes), tuple(velocities), d_max, a_max)


def flux_divergence(face: FaceFluxes) -> np.ndarray:
    """Cellwise (F_{i+1/2} - F_{i-1/2}) / h summed over axes, flattened"""
    total = np.zeros(face.grid.shape)
    for axis, (flux, h) in enumerate(zip(face.fluxes, face.grid.spacing)):
        total += np.diff(flux, axis=axis) / h
    return total.ravel()


def raw_dt(state, model: ModelSpec, cfl: float, face: FaceFluxes = None) -> float:
    """Unclamped explicit step bound"""
    if face is None:
        face = compute_fluxes(state, model)
    grid = state.u.grid
    h = grid.h_min
    dim = grid.dimension

    bounds = [h**2 / (2 * dim * face.d_max)]
    if face.a_max > 0:
        bounds.append(h / (2 * dim * face.a_max))
    sup_u = float(np.max(state.u.values))
    bounds.append(1.0 / (model.lambda_ + model.mu * model.r * max(sup_u, 0.0) ** (model.r - 1.0) + 1.0))
    return cfl * min(bounds)


def stable_dt(state, model: ModelSpec, settings: SolverSettings, face: FaceFluxes = None) -> float:
    """
    cfl · min(h²/(2·dim·D_max), h/(2·dim·|a|_max), 1/(λ + μr(sup u)^{r-1} + 1)),
    clamped to [dt_min, dt_max]

    Raises:
        DtUnderflow when the bound falls below dt_min
    """
    dt = raw_dt(state, model, settings.cfl, face)
    if not dt >= settings.dt_min:
        raise DtUnderflow(dt, settings.dt_min)
    if settings.dt_max is not None:
        dt = min(dt, settings.dt_max)
    return dt
