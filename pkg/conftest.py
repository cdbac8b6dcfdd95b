"""
Shared fixtures: test fields, sample points, small grids and a short free-wave run
"""
import numpy as np
import pytest

from models.state import RadialGrid, SystemSpec
from models.tensors import CoefficientTensors
from services import fields as field_service
from services.solver import bump_data, required_r_max, run_system

RUN_B = 2.0
RUN_T_FINAL = 7.0


@pytest.fixture(scope="session")
def gauss_field():
    return field_service.gaussian_field(1.0, 0.1, 0.2, 5.0, (0.5, -0.3, 0.2), name="gauss")


@pytest.fixture(scope="session")
def wide_field():
    return field_service.gaussian_field(name="gauss-wide")


@pytest.fixture(scope="session")
def lambda_points():
    return field_service.sample_points(30, seed=0, region="lambda")


@pytest.fixture(scope="session")
def exterior_points():
    return field_service.sample_points(30, seed=1, region="exterior")


@pytest.fixture
def small_grid():
    return RadialGrid(r_max=5.0, dr=0.05)


@pytest.fixture(scope="session")
def free_wave_record():
    """Free wave from bump data at t = 3 up to t = 7 (covers H_T in Lambda' for T <= 3.6)"""
    spec = SystemSpec(tensors=CoefficientTensors.zeros(1, 0), masses=(0.0,), name="free_wave")
    grid = RadialGrid(r_max=required_r_max(RUN_T_FINAL, RUN_B), dr=0.05)
    return run_system(spec, grid, bump_data(grid, RUN_B, [0.01]), RUN_T_FINAL, run_id="fixture-free-wave")


@pytest.fixture
def rng():
    return np.random.default_rng(0)
