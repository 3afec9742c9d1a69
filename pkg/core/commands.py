"""
Subcommand implementations

Exit codes: 0 ok / Bounded, 1 error, 2 NotCovered, 3 BlowupSuspected.
Machine-readable rows go to standard output, messages to standard error.
"""
import logging
from pathlib import Path
from typing import Iterable, Optional

from rich.console import Console
from rich.table import Table

from config.run_config import RunSpec, parse_config
from core.errors import ChemotaxisError
from core.runner import classify_or_none, execute
from core.sweep import REGIME_MAP, run_sweep
from diagnostics.norms import sup_norm, total_mass
from model.problem import ModelSpec
from model.production import make_production_law
from solver.fluxes import raw_dt
from solver.grid import build_grid
from solver.presets import get_preset
from solver.stepper import init_state
from theory.assumptions import BOUNDED, classify, mass_bound
from theory.exponents import RELATIONS, default_q, find_pbar, flag_column, gn_exponents

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NOT_COVERED = 2
EXIT_BLOWUP = 3

CLASSIFY_HEADER = "a1,a2,a3,a4,a5,verdict,witness"
EXPONENT_COLUMNS = (
    "p", "q", "theta", "sigma", "sigma_theta_half", "theta1", "sigma1", "sigma1_theta1_half",
    "theta2", "sigma1_theta2_half", "theta3", "theta4", "sigma2", "sigma2_theta4_half",
)
PBAR_HEADER = "p_bar,q,required"

console = Console()
err_console = Console(stderr=True)


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def _fail(message: str) -> int:
    err_console.print(f"[red]error:[/red] {message}", highlight=False)
    logger.debug(message, exc_info=True)
    return EXIT_ERROR


def _load(config_path) -> RunSpec:
    return parse_config(Path(config_path).read_text(encoding="utf-8"))


# ============ run ============
def cmd_run(config_path) -> int:
    try:
        spec = _load(config_path)
        outcome = execute(spec)
    except (OSError, ChemotaxisError, ValueError) as e:
        return _fail(str(e))

    series = outcome.series
    table = Table(title="run summary", show_header=False)
    table.add_row("verdict", str(series.verdict))
    table.add_row("assessment", str(series.assessment))
    table.add_row("regime", outcome.report.regime_verdict or "n/a (test mode)")
    table.add_row("consistency", outcome.report.flag)
    table.add_row("final t", f"{outcome.state.t:.6g}")
    table.add_row("sup u", f"{series.sup_u[-1]:.6g}")
    if outcome.report.mass_margin is not None:
        table.add_row("mass margin", f"{outcome.report.mass_margin:.4f}")
    if outcome.report.advice:
        table.add_row("advice", outcome.report.advice)
    err_console.print(table)
    err_console.print(f"output written to {spec.output.dir}")

    return EXIT_BLOWUP if series.verdict.blowup else EXIT_OK


# ============ classify ============
def placeholder_model(tau, variant, m1, m2, m3, k, l, r, n) -> ModelSpec:
    """Exponent-only model; all coefficients are 1 since verdicts ignore them"""
    return ModelSpec(
        variant=variant,
        tau=tau,
        r=r,
        m1=m1,
        m2=m2,
        m3=m3,
        attractant=make_production_law("attractant", "prototype", {"alpha": 1.0, "k": k}),
        repellent=make_production_law("repellent", "prototype", {"gamma": 1.0, "l": l}),
        n=n,
    )


def cmd_classify(tau, variant, m1, m2, m3, k, l, r, n, header: bool = False) -> int:
    try:
        report = classify(placeholder_model(tau, variant, m1, m2, m3, k, l, r, n))
    except ChemotaxisError as e:
        return _fail(str(e))

    if header:
        print(CLASSIFY_HEADER)
    flags = [report.a1, report.a2, report.a3, report.a4, report.a5]
    print(",".join([_cell(f) for f in flags] + [report.verdict, report.witness_text()]))
    for note in report.notes:
        logger.info(note)

    return EXIT_OK if report.verdict == BOUNDED else EXIT_NOT_COVERED


# ============ exponents ============
def cmd_exponents(
    n,
    m1,
    m2,
    m3,
    k,
    l,
    p: Optional[float] = None,
    q: Optional[float] = None,
    search: bool = False,
    require: Optional[Iterable[str]] = None,
    header: bool = False,
) -> int:
    q = default_q(l, m3) if q is None else q
    try:
        if search:
            result = find_pbar(q, n, m1, m2, m3, k, l, required=require)
            if header:
                print(PBAR_HEADER)
            print(f"{_cell(result.p_bar)},{_cell(result.q)},{';'.join(result.required)}")
            logger.info(f"p̄={result.p_bar:g} certified on ({result.p_bar:g}, {result.certificate[-1]:g}]")
            return EXIT_OK

        if p is None:
            return _fail("exponents need --p or --find-pbar")
        exponents = gn_exponents(p, q, n, m1, m2, m3, k, l)
    except ChemotaxisError as e:
        return _fail(str(e))

    row = exponents.as_row()
    columns = list(EXPONENT_COLUMNS) + [flag_column(name) for name in RELATIONS]
    if header:
        print(",".join(columns))
    print(",".join(_cell(row.get(c)) for c in columns))
    return EXIT_OK


# ============ sweep ============
def cmd_sweep(config_path, jobs: Optional[int] = None) -> int:
    try:
        spec = _load(config_path)
        rows = run_sweep(spec, jobs=jobs, config_path=str(config_path), console=err_console)
    except (OSError, ChemotaxisError, ValueError) as e:
        return _fail(str(e))

    failed = sum(1 for row in rows if row["status"] != "ok")
    err_console.print(
        f"{len(rows)} points written to {Path(spec.output.dir) / REGIME_MAP}"
        + (f" ([yellow]{failed} failed[/yellow])" if failed else "")
    )
    return EXIT_OK


# ============ check ============
def cmd_check(config_path) -> int:
    """Validate a config and show what a run would do, without simulating"""
    try:
        spec = _load(config_path)
        grid = build_grid(spec.domain)
        settings = spec.solver_settings()
        preset = get_preset(spec.init.preset, **spec.init.kwargs())
        state = init_state(grid, preset, spec.model, settings, signals=spec.init.signals)
        first_dt = raw_dt(state, spec.model, settings.cfl)
    except (OSError, ChemotaxisError, ValueError) as e:
        return _fail(str(e))

    regime = classify_or_none(spec)
    table = Table(title=f"check {config_path}", show_header=False)
    table.add_row("model", f"{spec.model.variant} τ={spec.model.tau} n={spec.model.n}")
    if regime is None:
        table.add_row("regime", "n/a (test mode)")
    else:
        table.add_row("assumptions", " ".join(
            f"{name.upper()}={'T' if getattr(regime, name) else 'F'}" for name in ("a1", "a2", "a3", "a4", "a5")
        ))
        table.add_row("regime", f"{regime.verdict} {regime.witness_text()}".strip())
        for note in regime.notes:
            table.add_row("note", note)
    table.add_row("grid", f"{grid.cells} cells, h={grid.h_min:.4g}, |Ω|={grid.measure:.6g}")
    mode = "elliptic" if spec.model.tau == 0 else spec.init.signals
    table.add_row("initial signals", f"{mode}, sup v={sup_norm(state.v):.4g}, sup w={sup_norm(state.w):.4g}")
    table.add_row("first dt",f"{first_dt:.4g} (dt_min={settings.dt_min:g}, dt_max={settings.dt_max})")
    table.add_row("record interval", f"{spec.time.record_interval:g}")
    if spec.model.lambda_ > 0 and spec.model.mu > 0:
        bound = mass_bound(spec.model.lambda_, spec.model.mu, spec.model.r, grid.measure, total_mass(state.u))
        table.add_row("mass bound", f"{bound:.6g}")
    console.print(table)
    return EXIT_OK
