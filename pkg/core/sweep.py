"""
Parameter sweeps: classify (and optionally simulate) every point of a
Cartesian grid of model parameters, then assemble the regime map
"""
import itertools
import logging
from concurrent.futures import ProcessPoolExecutor, as_completed
from datetime import datetime
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np
from rich.console import Console
from rich.progress import BarColumn, MofNCompleteColumn, Progress, TextColumn, TimeElapsedColumn

from config.config import Config
from config.run_config import RunSpec, with_model_values
from core.errors import BudgetExceeded, ChemotaxisError
from core.runner import execute
from ledger.database import DatabaseManager
from theory.assumptions import classify

logger = logging.getLogger(__name__)

REGIME_MAP = "regime_map.csv"
LEDGER_FILE = "ledger.db"
ASSUMPTIONS = ("a1", "a2", "a3", "a4", "a5")


def sweep_points(spec: RunSpec) -> List[Dict[str, float]]:
    """Grid points in row-major order of the declared axes"""
    axes = spec.sweep.axes
    values = [np.linspace(axis.start, axis.stop, axis.count) for axis in axes]
    return [
        {axis.param: float(value) for axis, value in zip(axes, combo)}
        for combo in itertools.product(*values)
    ]


def evaluate_point(spec: RunSpec, idx: int, overrides: Dict[str, float], simulate: bool, out_dir: str) -> Dict:
    """Regime-map row for one grid point; failures become status rows"""
    row = {"idx": idx, "params": overrides, "status": "ok"}
    try:
        point = with_model_values(spec, overrides)
        regime = classify(point.model)
        row.update({name: getattr(regime, name) for name in ASSUMPTIONS})
        row["verdict"] = regime.verdict
        row["witness"] = regime.witness_text()

        if simulate:
            outcome = execute(point, Path(out_dir) / f"point_{idx:04d}")
            row["sup_u"] = outcome.series.sup_u[-1]
            row["mass_margin"] = outcome.report.mass_margin
            row["run_verdict"] = str(outcome.series.verdict)
    except (ChemotaxisError, ValueError, ArithmeticError) as e:
        row["status"] = f"error: {e}"
    return row


def _format(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value).replace(",", ";")


def write_regime_map(path: Path, params: Sequence[str], rows: List[Dict], simulate: bool) -> Path:
    columns = list(params) + list(ASSUMPTIONS) + ["verdict", "witness"]
    if simulate:
        columns += ["sup_u", "mass_margin", "run_verdict"]
    columns.append("status")

    with Path(path).open("w") as handle:
        handle.write(f"# generated={datetime.now().isoformat(timespec='seconds')}\n")
        handle.write(",".join(columns) + "\n")
        for row in rows:
            values = [row["params"].get(p) for p in params]
            values += [row.get(c) for c in columns[len(params):]]
            handle.write(",".join(_format(v) for v in values) + "\n")
    return Path(path)


def run_sweep(
    spec: RunSpec,
    out_dir=None,
    jobs: Optional[int] = None,
    config_path: Optional[str] = None,
    console: Optional[Console] = None,
) -> List[Dict]:
    """
    Evaluate every sweep point and write regime_map.csv plus ledger.db

    Raises:
        BudgetExceeded when the grid has more points than the budget allows
    """
    if spec.sweep is None or not spec.sweep.axes:
        raise ValueError("config has no [sweep] axes")

    points = sweep_points(spec)
    budget = spec.sweep.budget or Config.get_sweep_budget()
    if len(points) > budget:
        raise BudgetExceeded(len(points), budget)

    out_dir = Path(out_dir if out_dir is not None else spec.output.dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    workers = Config.get_jobs(jobs)
    simulate = spec.sweep.simulate
    logger.info(f"sweep: {len(points)} points, simulate={simulate}, {workers} workers")

    rows: List[Dict] = []
    progress = Progress(
        TextColumn("[bold blue]sweep"),
        BarColumn(),
        MofNCompleteColumn(),
        TimeElapsedColumn(),
        console=console or Console(stderr=True),
        transient=True,
    )
    with progress:
        task = progress.add_task("points", total=len(points))
        if workers == 1:
            for idx, overrides in enumerate(points):
                rows.append(evaluate_point(spec, idx, overrides, simulate, str(out_dir)))
                progress.advance(task)
        else:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                futures = [
                    pool.submit(evaluate_point, spec, idx, overrides, simulate, str(out_dir))
                    for idx, overrides in enumerate(points)
                ]
                for future in as_completed(futures):
                    rows.append(future.result())
                    progress.advance(task)

    rows.sort(key=lambda row: row["idx"])
    for row in rows:
        if row["status"] != "ok":
            logger.warning(f"point {row['idx']} {row['params']}: {row['status']}")

    params = [axis.param for axis in spec.sweep.axes]
    write_regime_map(out_dir / REGIME_MAP, params, rows, simulate)

    db = DatabaseManager(str(out_dir / LEDGER_FILE))
    try:
        sweep_id = db.create_sweep(config_path)
        for row in rows:
            db.save_point(sweep_id, row)
        db.end_sweep(sweep_id)
    finally:
        db.close()

    return rows
