"""
Time integration of the local and nonlocal systems

The cell density is advanced by explicit Euler on the flux divergence plus
the logistic source; the signals then follow u, either through elliptic
solves (τ=0, nonlocal) or one implicit Euler step (τ=1).
"""
import logging
from dataclasses import replace
from typing import Optional, Sequence, Tuple

import numpy as np

from config.config import Config
from core.errors import DtUnderflow, NegativeInitialData, NonFiniteField
from diagnostics.functionals import phi_functional
from diagnostics.norms import lp_norm, sup_norm, total_mass
from diagnostics.series import (
    BLOWUP_SUSPECTED,
    COMPLETED,
    BlowupThresholds,
    TimeSeries,
    Verdict,
    detect_blowup,
)
from model.problem import ModelSpec, validate_model
from solver.elliptic import relax_signal, solve_elliptic_local, solve_elliptic_nonlocal
from solver.fluxes import compute_fluxes, flux_divergence, stable_dt
from solver.grid import Field, Grid
from solver.presets import BasePreset
from solver.settings import SolverSettings
from solver.state import SimState

logger = logging.getLogger(__name__)

DEFAULT_SETTINGS = SolverSettings()
SIGNAL_MODES = ("equilibrium", "zero")


class RunHooks:
    """Observer notified by run(); override what you need"""

    def on_sample(self, state: SimState, series: TimeSeries):
        pass

    def on_snapshot(self, state: SimState, index: int):
        pass


def _elliptic_signals(
    model: ModelSpec,
    u: Field,
    settings: SolverSettings,
    previous: Optional[SimState] = None,
    local: bool = False,
) -> Tuple[Field, Field]:
    grid = u.grid
    f = Field(grid, model.f(u.values))
    g = Field(grid, model.g(u.values))
    v0 = previous.v if previous is not None else None
    w0 = previous.w if previous is not None else None

    if model.variant == "nonlocal" and not local:
        return (
            solve_elliptic_nonlocal(grid, f, settings, v0),
            solve_elliptic_nonlocal(grid, g, settings, w0),
        )
    return (
        solve_elliptic_local(grid, model.beta, f, settings, v0),
        solve_elliptic_local(grid, model.delta, g, settings, w0),
    )


def init_state(
    grid: Grid,
    preset: BasePreset,
    model: ModelSpec,
    settings: SolverSettings = DEFAULT_SETTINGS,
    signals: str = "equilibrium",
) -> SimState:
    """
    Initial state from a preset

    For τ=0 and the nonlocal variant the signals come from the elliptic
    solves. For τ=1 they come from the preset when it carries them, otherwise
    from `signals`: "equilibrium" (elliptic solves with u0) or "zero".
    """
    model = validate_model(model)
    if signals not in SIGNAL_MODES:
        raise ValueError(f"signals must be one of {SIGNAL_MODES}, got {signals!r}")

    u0, v0, w0 = preset.build(grid)
    u0 = np.asarray(u0, dtype=float)
    if not np.all(np.isfinite(u0)) or np.any(u0 < 0):
        raise NegativeInitialData(f"{preset!r} yields negative or non-finite u0")
    u = Field(grid, u0)

    if model.tau == 0:
        v, w = _elliptic_signals(model, u, settings)
    elif v0 is not None and w0 is not None:
        v, w = Field(grid, v0).require_finite("v0"), Field(grid, w0).require_finite("w0")
    elif signals == "equilibrium":
        v, w = _elliptic_signals(model, u, settings, local=True)
    else:
        v, w = grid.zeros(), grid.zeros()

    return SimState(t=0.0, dt=0.0, u=u, v=v, w=w, step_count=0)


def advance(
    state: SimState,
    model: ModelSpec,
    settings: SolverSettings = DEFAULT_SETTINGS,
    dt_cap: Optional[float] = None,
) -> Tuple[SimState, float]:
    """One step; returns the new state and the stable dt before capping"""
    face = compute_fluxes(state, model)
    dt_stable = stable_dt(state, model, settings, face)
    dt = dt_stable if dt_cap is None else min(dt_stable, dt_cap)

    u = state.u.values
    u_plus = np.maximum(u, 0.0)
    reaction = model.lambda_ * u_plus - model.mu * u_plus**model.r
    u_new = np.maximum(u + dt * flux_divergence(face) + dt * reaction, 0.0)
    if not np.all(np.isfinite(u_new)):
        raise NonFiniteField(f"u became non-finite at t={state.t + dt:.6g}")

    grid = state.grid
    u_field = Field(grid, u_new)
    if model.tau == 0:
        v, w = _elliptic_signals(model, u_field, settings, previous=state)
    else:
        v = relax_signal(grid, state.v, Field(grid, model.f(u_new)), model.beta, dt, settings)
        w = relax_signal(grid, state.w, Field(grid, model.g(u_new)), model.delta, dt, settings)

    new_state = SimState(
        t=state.t + dt, dt=dt, u=u_field, v=v, w=w, step_count=state.step_count + 1,
    )
    return new_state, dt_stable


def step(state: SimState, model: ModelSpec, settings: SolverSettings = DEFAULT_SETTINGS) -> SimState:
    return advance(state, model, settings)[0]


def _record(series: TimeSeries, state: SimState, dt: float):
    u = state.u
    series.append(
        state.t,
        total_mass(u),
        sup_norm(u),
        sup_norm(state.v),
        sup_norm(state.w),
        dt,
        phi_functional(u, series.phi_p),
        {p: lp_norm(u, p) for p in series.p_list},
    )


def run(
    model: ModelSpec,
    grid: Grid,
    preset: BasePreset,
    T: float,
    settings: SolverSettings = DEFAULT_SETTINGS,
    hooks: Optional[RunHooks] = None,
    record_interval: Optional[float] = None,
    snapshot_every: int = 0,
    p_list: Sequence[float] = (2.0,),
    phi_p: float = 2.0,
    signals: str = "equilibrium",
    growth_factor: float = Config.GROWTH_FACTOR,
) -> Tuple[TimeSeries, SimState]:
    """
    Integrate up to T, sampling every record_interval (default T/500)

    Aborts with BlowupSuspected when sup u exceeds the blow-up threshold or
    the stable step drops below dt_min. The series carries the run verdict
    and the detect_blowup assessment.
    """
    if not T > 0:
        raise ValueError(f"T must be positive, got {T}")
    model = validate_model(model)
    hooks = hooks or RunHooks()
    record_interval = record_interval or T / Config.RECORD_SAMPLES
    if not record_interval > 0:
        raise ValueError(f"record_interval must be positive, got {record_interval}")

    logger.info(f"run: {model.variant} τ={model.tau} on {grid.cells} cells up to T={T:g}")
    state = init_state(grid, preset, model, settings, signals)
    series = TimeSeries(p_list=p_list, phi_p=phi_p)
    verdict = Verdict(COMPLETED)

    def sample(current: SimState, dt: float):
        _record(series, current, dt)
        hooks.on_sample(current, series)
        index = len(series) - 1
        if snapshot_every and index % snapshot_every == 0:
            hooks.on_snapshot(current, index)

    try:
        sample(state, stable_dt(state, model, settings))
    except DtUnderflow as e:
        sample(state, e.dt)
        verdict = Verdict(BLOWUP_SUSPECTED, "dt_min")

    records = 1
    snap = 1e-12 * max(1.0, T)
    while verdict.kind == COMPLETED and state.t < T - snap:
        target = min(records * record_interval, T)
        try:
            state, dt_stable = advance(state, model, settings, dt_cap=target - state.t)
        except DtUnderflow as e:
            logger.warning(f"dt underflow at t={state.t:.6g}: {e}")
            if state.t > series.times[-1]:
                sample(state, e.dt)
            else:
                series.dt[-1] = e.dt
            verdict = Verdict(BLOWUP_SUSPECTED, "dt_min")
            break

        if abs(state.t - target) <= snap:
            state = replace(state, t=target)

        if sup_norm(state.u) > settings.blowup_threshold:
            logger.warning(f"sup u={sup_norm(state.u):.3e} crossed the threshold at t={state.t:.6g}")
            sample(state, dt_stable)
            verdict = Verdict(BLOWUP_SUSPECTED, "threshold")
            break

        if state.t >= target:
            sample(state, dt_stable)
            records += 1

    series.verdict = verdict
    series.assessment = detect_blowup(
        series,
        BlowupThresholds(
            blowup_threshold=settings.blowup_threshold,
            dt_min=settings.dt_min,
            growth_factor=growth_factor,
        ),
    )
    logger.info(
        f"run finished at t={state.t:.6g} after {state.step_count} steps: "
        f"{verdict}, assessment {series.assessment}"
    )
    return series, state
