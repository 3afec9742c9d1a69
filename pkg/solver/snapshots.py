"""
Field snapshots as text tables

    # t=<time> dim=<d> nx=<..> [ny=<..>]
    x[,y],u,v,w          one row per cell, 17 significant digits
"""
from pathlib import Path
from typing import List, Tuple

import numpy as np

from core.errors import FileFormatError
from solver.grid import Field, Grid
from solver.state import SimState

FLOAT_FORMAT = "%.17g"


def _header(t: float, grid: Grid) -> str:
    parts = [f"t={t:.17g}", f"dim={grid.dimension}", f"nx={grid.cells[0]}"]
    if grid.dimension == 2:
        parts.append(f"ny={grid.cells[1]}")
    return "# " + " ".join(parts)


def write_snapshot(path, state: SimState) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    grid = state.grid
    table = np.column_stack([*grid.mesh, state.u.values, state.v.values, state.w.values])
    np.savetxt(path, table, fmt=FLOAT_FORMAT, delimiter=",", header=_header(state.t, grid)[2:], comments="# ")
    return path


def _parse_header(line: str, path) -> dict:
    if not line.startswith("#"):
        raise FileFormatError(f"{path}: missing '# t=... dim=...' header")
    fields = {}
    for token in line[1:].split():
        key, sep, value = token.partition("=")
        if not sep:
            raise FileFormatError(f"{path}: malformed header token {token!r}")
        fields[key] = value
    return fields


def read_snapshot_columns(path, grid: Grid) -> Tuple[float, List[np.ndarray]]:
    """
    Read a snapshot-style table written on `grid`

    Returns:
        The header time and the value columns after the coordinates
        (u only, or u, v, w)
    """
    path = Path(path)
    try:
        with path.open() as handle:
            header = _parse_header(handle.readline().strip(), path)
            rows = np.loadtxt(handle, delimiter=",", ndmin=2)
    except OSError as e:
        raise FileFormatError(f"cannot read {path}: {e}") from e
    except ValueError as e:
        raise FileFormatError(f"{path}: {e}") from e

    try:
        t = float(header.get("t", 0.0))
        dim = int(header["dim"])
        cells = [int(header["nx"])] + ([int(header["ny"])] if dim == 2 else [])
    except (KeyError, ValueError) as e:
        raise FileFormatError(f"{path}: incomplete header ({e})") from e

    if dim != grid.dimension or tuple(cells) != grid.cells:
        raise FileFormatError(f"{path}: table is dim={dim} cells={cells}, grid is {grid.cells}")
    if rows.shape[0] != grid.size:
        raise FileFormatError(f"{path}: {rows.shape[0]} rows for {grid.size} cells")
    if rows.shape[1] not in (dim + 1, dim + 3):
        raise FileFormatError(f"{path}: expected {dim + 1} or {dim + 3} columns, got {rows.shape[1]}")

    return t, [rows[:, j].copy() for j in range(dim, rows.shape[1])]


def read_snapshot(path, grid: Grid) -> SimState:
    t, columns = read_snapshot_columns(path, grid)
    if len(columns) != 3:
        raise FileFormatError(f"{path}: a full snapshot needs u, v and w columns")
    u, v, w = (Field(grid, c) for c in columns)
    return SimState(t=t, dt=0.0, u=u, v=v, w=w)
