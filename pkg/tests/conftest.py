import numpy as np
import pytest

from bohmlib.grid import GridSpec
from bohmlib.model import TwoSlitParams
from bohmlib.propagator import time_grid
from bohmlib.trajectories import SamplerSpec, ensemble_run


@pytest.fixture(scope="session")
def params():
    return TwoSlitParams.defaults()


@pytest.fixture(scope="session")
def single():
    """The d = 0 limit: one Gaussian packet."""
    return TwoSlitParams(d=0.0)


@pytest.fixture(scope="session")
def wide_grid():
    """Default run grid, wide enough for the packets at t = 10."""
    return GridSpec(-128.0, 128.0, 8192)


@pytest.fixture(scope="session")
def small_grid():
    return GridSpec(-32.0, 32.0, 2048)


@pytest.fixture(scope="session")
def far_field_ensemble(params):
    """2000 quantile trajectories stored every 0.01 up to t = 10."""
    return ensemble_run(params, SamplerSpec(2000), time_grid(0.0, 10.0, 0.01))
