"""
One configured simulation: run, write its files, compare with theory
"""
import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from config.run_config import RunSpec
from core.errors import InvalidHypothesisParameter
from diagnostics.report import BoundednessReport, boundedness_report
from diagnostics.series import BlowupThresholds, TimeSeries
from model.problem import model_summary
from solver.grid import Grid, build_grid
from solver.presets import get_preset
from solver.snapshots import write_snapshot
from solver.state import SimState
from solver.stepper import RunHooks, run
from theory.assumptions import RegimeReport, classify

logger = logging.getLogger(__name__)

SERIES_FILE = "timeseries.csv"
REPORT_FILE = "regime_report.json"
FINAL_SNAPSHOT = "final.txt"


class SnapshotWriter(RunHooks):
    """Writes snapshot_<index>.txt on every snapshot sample"""

    def __init__(self, out_dir: Path):
        self.out_dir = Path(out_dir)

    def on_snapshot(self, state: SimState, index: int):
        write_snapshot(self.out_dir / f"snapshot_{index:05d}.txt", state)


@dataclass
class RunOutcome:
    series: TimeSeries
    state: SimState
    grid: Grid
    regime: Optional[RegimeReport]
    report: BoundednessReport


def classify_or_none(spec: RunSpec) -> Optional[RegimeReport]:
    """Regime report, or None for test-mode models"""
    try:
        return classify(spec.model)
    except InvalidHypothesisParameter as e:
        logger.info(f"no regime verdict: {e}")
        return None


def execute(spec: RunSpec, out_dir=None) -> RunOutcome:
    """Run `spec` and write the series CSV, snapshots and the regime sidecar"""
    out_dir = Path(out_dir if out_dir is not None else spec.output.dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    grid = build_grid(spec.domain)
    preset = get_preset(spec.init.preset, **spec.init.kwargs())
    settings = spec.solver_settings()
    hooks = SnapshotWriter(out_dir) if spec.output.snapshot_every else None

    series, state = run(
        spec.model,
        grid,
        preset,
        spec.time.T,
        settings=settings,
        hooks=hooks,
        record_interval=spec.time.record_interval,
        snapshot_every=spec.output.snapshot_every,
        p_list=spec.output.p_list,
        phi_p=spec.output.phi_p,
        signals=spec.init.signals,
        growth_factor=spec.time.growth_factor,
    )

    regime = classify_or_none(spec)
    thresholds = BlowupThresholds(
        blowup_threshold=spec.time.blowup_threshold,
        dt_min=spec.time.dt_min,
        growth_factor=spec.time.growth_factor,
    )
    report = boundedness_report(series, regime, spec.model, grid.measure, thresholds)

    series.write_csv(out_dir / SERIES_FILE)
    write_snapshot(out_dir / FINAL_SNAPSHOT, state)
    sidecar = {
        "model": model_summary(spec.model),
        "regime": None if regime is None else {
            "a1": regime.a1, "a2": regime.a2, "a3": regime.a3, "a4": regime.a4, "a5": regime.a5,
            "verdict": regime.verdict,
            "theorem": regime.theorem,
            "witness": regime.witness_text(),
            "notes": list(regime.notes),
        },
        "run_verdict": str(series.verdict),
        "final_time": state.t,
        "steps": state.step_count,
        "consistency": report.as_dict(),
    }
    (out_dir / REPORT_FILE).write_text(json.dumps(sidecar, indent=2) + "\n")

    return RunOutcome(series=series, state=state, grid=grid, regime=regime, report=report)
