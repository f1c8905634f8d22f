import numpy as np
import pytest

from pathreg.paths import Grid, make_path
from pathreg.regcalc import EpsilonSchedule


@pytest.fixture
def unit_grid():
    """Grid on [-1, 0] with spacing 2**-10"""
    return Grid.window(1.0, 2**10 + 1)


@pytest.fixture
def coarse_grid():
    """Grid on [-1, 0] with spacing 2**-6"""
    return Grid.window(1.0, 2**6 + 1)


@pytest.fixture
def short_schedule():
    """eps = 2**-2, ..., 2**-6, valid on grids with spacing <= 2**-7"""
    return EpsilonSchedule.geometric(eps_max=0.25, n_levels=5)


@pytest.fixture
def identity_path(unit_grid):
    return make_path("linear", unit_grid)


@pytest.fixture
def sine_path(unit_grid):
    return make_path("sine", unit_grid, amplitude=0.5, frequency=0.5)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def cyl_quadratic():
    """Quadratic outer function of two coordinates, smooth basis, T = 1"""
    from pathreg.funcder import BasisFunction, CylindricalFunctional, OuterFunction

    return CylindricalFunctional(
        outer=OuterFunction.quadratic(
            [[2.0, 0.5], [0.5, 1.0]], weights=[0.3, -0.2], constant=0.1
        ),
        basis=[BasisFunction.polynomial([1.0, 0.5]), BasisFunction.cosine(0.25)],
        T=1.0,
    )
