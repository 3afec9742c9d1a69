import math

import numpy as np
import pytest

from model.problem import DomainSpec, ModelSpec
from model.production import make_production_law
from solver.grid import Field, build_grid
from solver.state import SimState


def make_model(
    variant="local",
    tau=0,
    chi=1.0,
    xi=1.0,
    lambda_=1.0,
    mu=1.0,
    r=2.0,
    m1=1.0,
    m2=1.0,
    m3=1.0,
    k=1.0,
    l=1.0,
    alpha=1.0,
    gamma0=1.0,
    gamma1=None,
    beta=1.0,
    delta=1.0,
    n=1,
    test_mode=False,
) -> ModelSpec:
    return ModelSpec(
        variant=variant,
        tau=tau,
        chi=chi,
        xi=xi,
        lambda_=lambda_,
        mu=mu,
        r=r,
        m1=m1,
        m2=m2,
        m3=m3,
        beta=beta,
        delta=delta,
        attractant=make_production_law("attractant", "prototype", {"alpha": alpha, "k": k}),
        repellent=make_production_law(
            "repellent", "prototype",
            {"gamma0": gamma0, "gamma1": gamma0 if gamma1 is None else gamma1, "l": l},
        ),
        n=n,
        test_mode=test_mode,
    )


def make_grid(cells=(16,), extents=(math.pi,)):
    return build_grid(DomainSpec(dimension=len(cells), extents=tuple(extents), cells=tuple(cells)))


def make_state(grid, u, v=None, w=None, t=0.0):
    zeros = np.zeros(grid.size)
    return SimState(
        t=t,
        dt=0.0,
        u=Field(grid, u),
        v=Field(grid, zeros if v is None else v),
        w=Field(grid, zeros if w is None else w),
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def grid_1d():
    return make_grid()


@pytest.fixture
def grid_2d():
    return make_grid(cells=(8, 8), extents=(1.0, 1.0))
