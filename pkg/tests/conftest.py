import pytest

from floquet_kdvbf.model import Params
from floquet_kdvbf.orbit import continue_family

EPS_GRID = (0.001, 0.002, 0.004, 0.008, 0.016)


@pytest.fixture(scope="session")
def unit_params():
    return Params(1.0, 1.0)


@pytest.fixture(scope="session")
def family(unit_params):
    return continue_family(EPS_GRID, unit_params)


@pytest.fixture(scope="session")
def small_wave(family):
    return family[0]
