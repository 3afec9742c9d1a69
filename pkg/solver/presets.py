"""
Initial-data presets
"""
from typing import Dict, Optional, Tuple

import numpy as np

from core.errors import NegativeInitialData, NonPositiveParameter
from solver.grid import Grid
from solver.snapshots import read_snapshot_columns

InitialData = Tuple[np.ndarray, Optional[np.ndarray], Optional[np.ndarray]]


class BasePreset:
    """Base class for all initial-data presets"""

    name = "base"
    defaults: Dict[str, object] = {}

    def __init__(self, **params):
        unknown = set(params) - set(self.defaults)
        if unknown:
            raise ValueError(f"preset {self.name!r} does not take {', '.join(sorted(unknown))}")
        self.params = {**self.defaults, **params}

    def build(self, grid: Grid) -> InitialData:
        """Return u0 and, when the preset carries them, v0 and w0"""
        raise NotImplementedError("Each preset must implement build")

    def __repr__(self):
        args = ", ".join(f"{k}={v!r}" for k, v in self.params.items())
        return f"{self.name}({args})"


def _require_nonnegative(name: str, value: float):
    if not value >= 0:
        raise NegativeInitialData(f"{name} must be nonnegative, got {value}")


class ConstantPreset(BasePreset):
    name = "constant"
    defaults = {"c": 1.0}

    def build(self, grid: Grid) -> InitialData:
        c = float(self.params["c"])
        _require_nonnegative("c", c)
        return np.full(grid.size, c), None, None


class GaussianPreset(BasePreset):
    """floor + amplitude · exp(-|x - center|² / (2 width²))"""

    name = "gaussian"
    defaults = {"center": None, "width": 0.1, "amplitude": 1.0, "floor": 0.0}

    def build(self, grid: Grid) -> InitialData:
        width = float(self.params["width"])
        amplitude = float(self.params["amplitude"])
        floor = float(self.params["floor"])
        if not width > 0:
            raise NonPositiveParameter(f"gaussian width must be positive, got {width}")
        _require_nonnegative("amplitude", amplitude)
        _require_nonnegative("floor", floor)

        center = self.params["center"]
        if center is None:
            center = tuple(0.5 * e for e in grid.extents)
        center = np.atleast_1d(np.asarray(center, dtype=float))
        if center.size != grid.dimension:
            raise ValueError(f"gaussian center needs {grid.dimension} coordinates, got {center.size}")

        r2 = sum((x - c) ** 2 for x, c in zip(grid.mesh, center))
        return floor + amplitude * np.exp(-r2 / (2.0 * width**2)), None, None


class PerturbedConstantPreset(BasePreset):
    """c + amplitude · U(-1, 1) with a seeded generator"""

    name = "perturbed_constant"
    defaults = {"c": 1.0, "amplitude": 0.01, "seed": 0}

    def build(self, grid: Grid) -> InitialData:
        c = float(self.params["c"])
        amplitude = float(self.params["amplitude"])
        _require_nonnegative("c", c)
        _require_nonnegative("amplitude", amplitude)
        if amplitude > c:
            raise NegativeInitialData(f"amplitude {amplitude} exceeds c={c}; data would go negative")

        rng = np.random.default_rng(int(self.params["seed"]))
        return c + amplitude * rng.uniform(-1.0, 1.0, grid.size), None, None


class FromFilePreset(BasePreset):
    """Snapshot-style table with u, or u, v, w columns"""

    name = "from_file"
    defaults = {"path": None}

    def build(self, grid: Grid) -> InitialData:
        if not self.params["path"]:
            raise ValueError("from_file preset needs a path")
        _, columns = read_snapshot_columns(self.params["path"], grid)
        if len(columns) == 3:
            return columns[0], columns[1], columns[2]
        return columns[0], None, None


# Preset registry
PRESETS = {
    "constant": ConstantPreset,
    "gaussian": GaussianPreset,
    "perturbed_constant": PerturbedConstantPreset,
    "from_file": FromFilePreset,
}


def get_preset(name: str, **params) -> BasePreset:
    """Get preset instance by name"""
    preset_class = PRESETS.get(name.lower())
    if preset_class is None:
        raise ValueError(f"unknown preset {name!r}, expected one of {', '.join(PRESETS)}")
    return preset_class(**params)
