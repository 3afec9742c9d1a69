import math

import numpy as np
import pytest

from conftest import make_grid, make_model, make_state
from core.errors import (
    DtUnderflow,
    FileFormatError,
    NegativeInitialData,
    NonPositiveEta,
    TooFewCells,
)
from diagnostics.norms import total_mass
from model.problem import DomainSpec, homogeneous_equilibrium
from solver.elliptic import relax_signal, solve_elliptic_local, solve_elliptic_nonlocal
from solver.fluxes import compute_fluxes, flux_divergence, raw_dt, stable_dt
from solver.grid import Field, build_grid
from solver.presets import get_preset
from solver.settings import SolverSettings
from solver.snapshots import read_snapshot, write_snapshot
from solver.stepper import advance, init_state, run, step


# ============ grid ============
def test_grid_geometry():
    grid = build_grid(DomainSpec(dimension=1, extents=(math.pi,), cells=(100,)))
    assert grid.spacing[0] == pytest.approx(math.pi / 100)
    assert grid.measure == pytest.approx(math.pi)

    grid = build_grid(DomainSpec(dimension=2, extents=(1.0, 2.0), cells=(10, 20)))
    assert grid.cell_measure == pytest.approx(0.01)
    assert grid.measure == pytest.approx(2.0)
    assert grid.mesh[0].shape == (200,)


def test_too_few_cells():
    with pytest.raises(TooFewCells):
        build_grid(DomainSpec(dimension=1, extents=(1.0,), cells=(2,)))


def test_laplacian_annihilates_constants(grid_1d, grid_2d):
    for grid in (grid_1d, grid_2d):
        np.testing.assert_allclose(grid.laplacian @ np.ones(grid.size), 0.0, atol=1e-10)
    assert np.all(grid_1d.laplacian @ np.ones(grid_1d.size) == 0.0)


def test_field_shape_is_checked(grid_1d):
    with pytest.raises(ValueError):
        Field(grid_1d, np.zeros(grid_1d.size + 1))


# ============ elliptic solves ============
def test_local_solve_of_constant(grid_2d):
    z = solve_elliptic_local(grid_2d, 2.0, grid_2d.constant(3.0))
    np.testing.assert_allclose(z.values, 1.5, atol=1e-9)


def test_local_solve_needs_positive_eta(grid_1d):
    with pytest.raises(NonPositiveEta):
        solve_elliptic_local(grid_1d, 0.0, grid_1d.constant(1.0))


def test_nonlocal_solve_of_constant_is_zero(grid_2d):
    z = solve_elliptic_nonlocal(grid_2d, grid_2d.constant(5.0))
    assert np.all(z.values == 0.0)


def _observed_orders(solve, exact, cells, dim):
    errors = []
    for n in cells:
        grid = make_grid(cells=(n,) * dim, extents=(math.pi,) * dim)
        z = solve(grid)
        errors.append(np.max(np.abs(z.values - exact(*grid.mesh))))
    return [math.log2(errors[i] / errors[i + 1]) for i in range(len(errors) - 1)]


@pytest.mark.parametrize("dim,cells,solve,exact", [
    (
        1, (32, 64, 128),
        lambda g: solve_elliptic_local(g, 1.0, Field(g, 2.0 * np.cos(g.mesh[0]))),
        lambda x: np.cos(x),
    ),
    (
        1, (32, 64, 128),
        lambda g: solve_elliptic_nonlocal(g, Field(g, np.cos(g.mesh[0]))),
        lambda x: np.cos(x),
    ),
    (
        2, (16, 32, 64),
        lambda g: solve_elliptic_local(g, 1.0, Field(g, 3.0 * np.cos(g.mesh[0]) * np.cos(g.mesh[1]))),
        lambda x, y: np.cos(x) * np.cos(y),
    ),
    (
        2, (16, 32, 64),
        lambda g: solve_elliptic_nonlocal(g, Field(g, np.cos(g.mesh[0]))),
        lambda x, y: np.cos(x),
    ),
], ids=["local-1d", "nonlocal-1d", "local-2d", "nonlocal-2d"])
def test_elliptic_second_order(dim, cells, solve, exact):
    for order in _observed_orders(solve, exact, cells, dim):
        assert order >= 1.9


def test_nonlocal_solution_has_zero_mean(grid_2d, rng):
    z = solve_elliptic_nonlocal(grid_2d, Field(grid_2d, rng.uniform(0, 1, grid_2d.size)))
    assert abs(z.mean()) < 1e-12


def test_relaxation_converges_to_the_elliptic_solution(grid_1d):
    psi = Field(grid_1d, 2.0 * np.cos(grid_1d.mesh[0]))
    target = solve_elliptic_local(grid_1d, 1.0, psi)

    z = grid_1d.zeros()
    for _ in range(200):
        z = relax_signal(grid_1d, z, psi, 1.0, 0.5)
    np.testing.assert_allclose(z.values, target.values, atol=1e-7)


@pytest.mark.parametrize("grid_name", ["grid_1d", "grid_2d"])
@pytest.mark.parametrize("dt", [1e-3, 0.1, 10.0])
def test_relaxation_without_source_never_raises_the_sup(grid_name, dt, rng, request):
    grid = request.getfixturevalue(grid_name)
    z = Field(grid, rng.uniform(-3.0, 5.0, grid.size))
    for _ in range(50):
        z_next = relax_signal(grid, z, grid.zeros(), 0.5, dt)
        assert np.max(np.abs(z_next.values)) <= np.max(np.abs(z.values)) * (1 + 1e-9) + 1e-9
        z = z_next


# ============ fluxes and time step ============
def test_constant_density_without_taxis_has_no_flux(grid_2d):
    model = make_model(chi=0.0, xi=0.0)
    face = compute_fluxes(make_state(grid_2d, np.full(grid_2d.size, 2.0)), model)
    for flux in face.fluxes:
        assert np.all(flux == 0.0)


def test_upwind_of_an_empty_cell_carries_no_taxis(grid_1d):
    u = np.ones(grid_1d.size)
    u[0] = 0.0
    model = make_model(chi=1.0, xi=0.0, m1=1.0)
    face = compute_fluxes(make_state(grid_1d, u, v=grid_1d.mesh[0]), model)

    h = grid_1d.spacing[0]
    assert face.velocities[0][0] < 0
    # only diffusion moves mass out of the empty cell
    assert face.fluxes[0][1] == pytest.approx(1.0 / h)


def test_fluxes_telescope(grid_1d, grid_2d, rng):
    model = make_model(chi=2.0, xi=1.5, m1=1.5, m2=0.5, m3=2.0)
    for grid in (grid_1d, grid_2d):
        state = make_state(
            grid,
            rng.uniform(0, 3, grid.size),
            rng.uniform(0, 1, grid.size),
            rng.uniform(0, 1, grid.size),
        )
        face = compute_fluxes(state, model)
        assert abs(np.sum(flux_divergence(face)) * grid.cell_measure) < 1e-10
        for axis, flux in enumerate(face.fluxes):
            assert np.all(np.take(flux, [0, -1], axis=axis) == 0.0)


def test_time_step_for_pure_diffusion():
    model = make_model(chi=0.0, xi=0.0, m1=1.0, lambda_=1.0)
    dts = []
    for cells in (16, 32):
        grid = make_grid(cells=(cells,))
        h = grid.spacing[0]
        dt = raw_dt(make_state(grid, np.zeros(grid.size)), model, 0.4)
        assert dt == pytest.approx(0.4 * min(h**2 / 2.0, 1.0 / 2.0))
        dts.append(dt)
    assert dts[0] / dts[1] == pytest.approx(4.0)


def test_time_step_is_clamped_to_dt_max(grid_1d):
    model = make_model(chi=0.0, xi=0.0)
    state = make_state(grid_1d, np.zeros(grid_1d.size))
    assert stable_dt(state, model, SolverSettings(dt_max=1e-4)) == 1e-4


def test_huge_density_underflows(grid_1d):
    state = make_state(grid_1d, np.full(grid_1d.size, 1e8))
    with pytest.raises(DtUnderflow) as info:
        stable_dt(state, make_model(), SolverSettings(dt_min=1e-6))
    assert info.value.dt < 1e-6


# ============ stepping ============
@pytest.mark.parametrize("tau", [0, 1])
def test_homogeneous_steady_state_is_preserved(grid_1d, tau):
    model = make_model(tau=tau, lambda_=1.0, mu=1.0, r=2.0, alpha=1.0, k=1.0, beta=1.0)
    u_star, v_star, w_star = homogeneous_equilibrium(model)
    assert (u_star, v_star, w_star) == pytest.approx((1.0, 2.0, 2.0))

    state = init_state(grid_1d, get_preset("constant", c=u_star), model)
    for _ in range(1000):
        state = step(state, model)
    np.testing.assert_allclose(state.u.values, u_star, rtol=0, atol=1e-12)
    np.testing.assert_allclose(state.v.values, v_star, rtol=0, atol=1e-12)
    np.testing.assert_allclose(state.w.values, w_star, rtol=0, atol=1e-12)
    assert state.step_count == 1000


def test_nonlocal_constant_density_follows_the_logistic_ode(grid_1d):
    model = make_model(variant="nonlocal", lambda_=1.0, mu=1.0, r=2.0)
    state = init_state(grid_1d, get_preset("constant", c=0.5), model)
    assert np.all(state.v.values == 0.0)
    assert np.all(state.w.values == 0.0)

    new_state, _ = advance(state, model)
    expected = 0.5 + new_state.dt * (0.5 - 0.25)
    np.testing.assert_allclose(new_state.u.values, expected, rtol=0, atol=1e-15)


def test_test_mode_conserves_mass_per_step(grid_2d):
    model = make_model(chi=0.0, xi=0.0, lambda_=0.0, mu=0.0, test_mode=True)
    state = init_state(grid_2d, get_preset("gaussian", width=0.2, floor=0.5), model)
    mass = total_mass(state.u)
    for _ in range(50):
        state = step(state, model)
        assert total_mass(state.u) == pytest.approx(mass, rel=1e-13)


def test_negative_initial_data_is_rejected(grid_1d):
    with pytest.raises(NegativeInitialData):
        init_state(grid_1d, get_preset("constant", c=-1.0), make_model())


def test_parabolic_signals_can_start_from_zero(grid_1d):
    model = make_model(tau=1)
    state = init_state(grid_1d, get_preset("constant", c=1.0), model, signals="zero")
    assert np.all(state.v.values == 0.0)
    with pytest.raises(ValueError):
        init_state(grid_1d, get_preset("constant"), model, signals="bogus")


def test_run_samples_on_the_record_grid(grid_1d):
    model = make_model(chi=0.0, xi=0.0, lambda_=0.0, mu=0.0, test_mode=True)
    series, state = run(
        model, grid_1d, get_preset("gaussian", width=0.3, floor=1.0), T=0.5,
        record_interval=0.1, p_list=(2.0, 4.0),
    )
    np.testing.assert_allclose(series.times, [0.0, 0.1, 0.2, 0.3, 0.4, 0.5], atol=1e-12)
    assert state.t == pytest.approx(0.5)
    assert series.verdict.kind == "Completed"
    assert series.mass == pytest.approx([series.mass[0]] * len(series), rel=1e-10)
    assert set(series.lp) == {2.0, 4.0}


def test_run_aborts_when_threshold_is_crossed(grid_1d):
    model = make_model(lambda_=5.0, mu=1.0, r=1.5)
    series, _ = run(
        model, grid_1d, get_preset("constant", c=1.0), T=10.0,
        settings=SolverSettings(blowup_threshold=2.0),
    )
    assert series.verdict.kind == "BlowupSuspected"
    assert series.verdict.reason == "threshold"
    assert series.sup_u[-1] > 2.0


def test_run_rejects_nonpositive_horizon(grid_1d):
    with pytest.raises(ValueError):
        run(make_model(), grid_1d, get_preset("constant"), T=0.0)


# ============ presets and snapshots ============
def test_constant_preset_mass(grid_2d):
    u0, v0, w0 = get_preset("constant", c=1.0).build(grid_2d)
    assert total_mass(Field(grid_2d, u0)) == pytest.approx(grid_2d.measure)
    assert v0 is None and w0 is None


def test_gaussian_peaks_at_the_center():
    grid = make_grid(cells=(15,), extents=(1.0,))
    u0, _, _ = get_preset("gaussian", amplitude=2.0, width=0.1).build(grid)
    assert int(np.argmax(u0)) == 7
    assert u0.max() == pytest.approx(2.0)
    assert u0.min() >= 0.0


def test_perturbed_constant_is_seeded(grid_1d):
    a = get_preset("perturbed_constant", c=1.0, amplitude=0.1, seed=3).build(grid_1d)[0]
    b = get_preset("perturbed_constant", c=1.0, amplitude=0.1, seed=3).build(grid_1d)[0]
    assert np.array_equal(a, b)
    assert np.all(np.abs(a - 1.0) <= 0.1)
    with pytest.raises(NegativeInitialData):
        get_preset("perturbed_constant", c=0.1, amplitude=0.2).build(grid_1d)


def test_unknown_preset_and_parameter():
    with pytest.raises(ValueError):
        get_preset("nope")
    with pytest.raises(ValueError):
        get_preset("constant", width=1.0)


def test_snapshot_preserves_the_state(tmp_path, grid_2d, rng):
    state = make_state(
        grid_2d, rng.uniform(0, 1, grid_2d.size), rng.uniform(0, 1, grid_2d.size),
        rng.uniform(0, 1, grid_2d.size), t=0.125,
    )
    path = write_snapshot(tmp_path / "snap.txt", state)
    assert path.read_text().startswith("# t=0.125 dim=2 nx=8 ny=8")

    loaded = read_snapshot(path, grid_2d)
    assert loaded.t == 0.125
    for name in ("u", "v", "w"):
        assert np.array_equal(getattr(loaded, name).values, getattr(state, name).values)


def test_snapshot_on_the_wrong_grid(tmp_path, grid_1d, grid_2d):
    path = write_snapshot(tmp_path / "snap.txt", make_state(grid_1d, np.ones(grid_1d.size)))
    with pytest.raises(FileFormatError):
        read_snapshot(path, grid_2d)


def test_from_file_preset_reads_density_only(tmp_path, grid_1d):
    path = tmp_path / "u0.txt"
    table = np.column_stack([grid_1d.mesh[0], np.linspace(0.0, 1.0, grid_1d.size)])
    np.savetxt(path, table, delimiter=",", header="t=0 dim=1 nx=16", comments="# ")

    u0, v0, w0 = get_preset("from_file", path=str(path)).build(grid_1d)
    np.testing.assert_allclose(u0, np.linspace(0.0, 1.0, grid_1d.size))
    assert v0 is None and w0 is None
