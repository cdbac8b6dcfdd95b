import numpy as np
import pytest

from core.errors import CoverageError, ValidationError
from models.geometry import Region
from models.state import RadialGrid, SystemSpec
from models.tensors import CoefficientTensors
from services.slices import (
    bridge_to_first_hyperboloid, coverage, covers, interpolate_all, interpolate_to_hyperboloid,
    interpolator_for,
)
from services.solver import ManufacturedBump, run_system


def test_coverage_of_fixture_run(free_wave_record):
    assert coverage(free_wave_record) == (3.0, 7.0)
    assert covers(free_wave_record, 3.5)
    assert not covers(free_wave_record, 4.0)
    assert covers(free_wave_record, 4.0, Region.interior())
    assert not covers(free_wave_record, 4.0, Region.exterior())
    assert not covers(free_wave_record, 2.5)


def test_uncovered_slice_raises(free_wave_record):
    with pytest.raises(CoverageError) as info:
        interpolate_all(free_wave_record, 4.0)
    assert info.value.details["covered"] == [3.0, 7.0]


def test_component_out_of_range(free_wave_record):
    with pytest.raises(ValidationError):
        interpolate_to_hyperboloid(free_wave_record, 3.5, component=1)


def test_bridge_slice_is_first_hyperboloid(free_wave_record):
    jets = bridge_to_first_hyperboloid(free_wave_record, 2.0)
    assert len(jets) == 1
    sl = jets[0].slice
    assert sl.T == 3.0
    assert sl.times.max() <= 5.0


def test_interpolator_is_cached(free_wave_record):
    assert interpolator_for(free_wave_record) is interpolator_for(free_wave_record)


def test_interpolation_matches_exact_solution():
    bump = ManufacturedBump(epsilon=1.0, alpha=0.5, beta=1.0, t_c=4.0)
    spec = SystemSpec(tensors=CoefficientTensors.zeros(1, 0), masses=(0.0,), name="manufactured")
    grid = RadialGrid(r_max=8.0, dr=0.025)
    record = run_system(spec, grid, bump.state(grid, 3.0), 5.0, source=bump.source)

    T = 3.5
    jet = interpolate_to_hyperboloid(record, T, region=Region.interior())
    t, r = jet.t, jet.slice.radii
    scale = bump.epsilon
    np.testing.assert_allclose(jet.u, bump.u(t, r), atol=2e-3 * scale)
    np.testing.assert_allclose(jet.u_t, bump.u_t(t, r), atol=2e-3 * scale)
    np.testing.assert_allclose(jet.u_x[:, 0], bump.u_r(t, r), atol=2e-3 * scale)
