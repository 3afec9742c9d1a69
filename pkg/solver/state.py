from dataclasses import dataclass

from solver.grid import Field


@dataclass(frozen=True)
class SimState:
    """Simulation state at time t; dt is the step that produced it"""

    t: float
    dt: float
    u: Field
    v: Field
    w: Field
    step_count: int = 0

    @property
    def grid(self):
        return self.u.grid
