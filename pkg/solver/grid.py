"""
Cell-centered rectangular grids and the fields that live on them
"""
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Tuple

import numpy as np
import scipy.sparse as sp

from core.errors import NonFiniteField, NonPositiveParameter, TooFewCells
from model.problem import DomainSpec

MIN_CELLS = 4


@dataclass(frozen=True)
class Grid:
    """Uniform grid on [0, L1] (x [0, L2]); values are stored flat in C order"""

    dimension: int
    cells: Tuple[int, ...]
    extents: Tuple[float, ...]

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.cells

    @property
    def size(self) -> int:
        return math.prod(self.cells)

    @property
    def spacing(self) -> Tuple[float, ...]:
        return tuple(length / count for length, count in zip(self.extents, self.cells))

    @property
    def h_min(self) -> float:
        return min(self.spacing)

    @property
    def cell_measure(self) -> float:
        return math.prod(self.spacing)

    @property
    def measure(self) -> float:
        return math.prod(self.extents)

    @cached_property
    def centers(self) -> Tuple[np.ndarray, ...]:
        """Per-axis cell-center coordinates"""
        return tuple((np.arange(n) + 0.5) * h for n, h in zip(self.cells, self.spacing))

    @cached_property
    def mesh(self) -> Tuple[np.ndarray, ...]:
        """Flattened center coordinates, one array per axis"""
        grids = np.meshgrid(*self.centers, indexing="ij")
        return tuple(g.ravel() for g in grids)

    @cached_property
    def laplacian(self) -> sp.csr_matrix:
        """Zero-flux 3-point / 5-point Laplacian"""
        axes = [_neumann_1d(n, h) for n, h in zip(self.cells, self.spacing)]
        if self.dimension == 1:
            return axes[0].tocsr()
        lx, ly = axes
        ix = sp.identity(self.cells[0], format="csr")
        iy = sp.identity(self.cells[1], format="csr")
        return (sp.kron(lx, iy) + sp.kron(ix, ly)).tocsr()

    def zeros(self) -> "Field":
        return Field(self, np.zeros(self.size))

    def constant(self, value: float) -> "Field":
        return Field(self, np.full(self.size, float(value)))


def _neumann_1d(n: int, h: float) -> sp.dia_matrix:
    main = np.full(n, -2.0)
    main[0] = main[-1] = -1.0
    off = np.ones(n - 1)
    return sp.diags([off, main, off], [-1, 0, 1]) / h**2


@dataclass(frozen=True, eq=False)
class Field:
    """One value per cell of a grid"""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float).ravel()
        if values.size != self.grid.size:
            raise ValueError(f"field has {values.size} values, grid has {self.grid.size} cells")
        object.__setattr__(self, "values", values)

    def as_array(self) -> np.ndarray:
        return self.values.reshape(self.grid.shape)

    def mean(self) -> float:
        return float(self.values.mean())

    def sup(self) -> float:
        return float(np.max(np.abs(self.values)))

    def require_finite(self, name: str = "field") -> "Field":
        if not np.all(np.isfinite(self.values)):
            raise NonFiniteField(f"{name} contains non-finite values")
        return self


def build_grid(domain: DomainSpec) -> Grid:
    """Grid for a rectangular domain; h_i = extent_i / cells_i"""
    if domain.dimension not in (1, 2):
        raise ValueError(f"dimension must be 1 or 2, got {domain.dimension}")
    if len(domain.extents) != domain.dimension or len(domain.cells) != domain.dimension:
        raise ValueError("extents and cells need one entry per dimension")
    for length in domain.extents:
        if not length > 0:
            raise NonPositiveParameter(f"domain extents must be positive, got {length}")
    for count in domain.cells:
        if int(count) != count or count < MIN_CELLS:
            raise TooFewCells(f"at least {MIN_CELLS} cells per axis required, got {count}")

    return Grid(
        dimension=domain.dimension,
        cells=tuple(int(c) for c in domain.cells),
        extents=tuple(float(e) for e in domain.extents),
    )
