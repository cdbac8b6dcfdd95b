import math

import numpy as np
import pytest

from core.errors import ConfigurationError, DomainError, EmptySliceError, ValidationError
from models.geometry import Region, SpacetimePoint
from services.geometry import (
    area_element_factor, build_slice, build_slice_3d, hyperboloid_time, lorentz_radius,
    region_bounds_check,
)


def test_hyperboloid_time_radius_and_vectors():
    assert hyperboloid_time(3.0, 4.0) == pytest.approx(5.0)
    x = np.array([[3.0, 4.0, 0.0], [0.0, 0.0, 0.0]])
    np.testing.assert_allclose(hyperboloid_time(12.0, x), [13.0, 12.0])


def test_hyperboloid_time_rejects_nonpositive_T():
    with pytest.raises(DomainError):
        hyperboloid_time(0.0, 1.0)


def test_lorentz_radius():
    assert lorentz_radius(SpacetimePoint.radial(5.0, 4.0)) == pytest.approx(3.0)
    with pytest.raises(DomainError):
        lorentz_radius(SpacetimePoint.radial(2.0, 3.0))


def test_omega_undefined_on_axis():
    with pytest.raises(DomainError):
        SpacetimePoint(2.0).omega


@pytest.mark.parametrize("T", [1.5, 3.0, 10.0])
def test_lambda_prime_t_range(T):
    report = region_bounds_check(T, Region.lambda_prime())
    assert report.passed
    assert report.t_min == pytest.approx(T)
    assert report.t_max == pytest.approx((T * T + 1.0) / 2.0)


@pytest.mark.parametrize("T", [0.5, 2.0, 7.0])
def test_interior_t_range(T):
    report = region_bounds_check(T, Region.interior())
    assert report.passed
    assert report.t_max == pytest.approx(2.0 * T / math.sqrt(3.0))


def test_slab_requires_ordered_radii():
    with pytest.raises(ValidationError):
        Region.slab(3.0, 2.0)


def test_area_element_factor_on_axis():
    assert area_element_factor(5.0, 0.0) == pytest.approx(1.0)
    assert area_element_factor(5.0, 5.0) == pytest.approx(math.sqrt(2.0))


@pytest.mark.parametrize("rule,rel", [("midpoint", 1e-5), ("gauss", 1e-10)])
def test_slice_weights_integrate_volume(rule, rel):
    T = 3.0
    sl = build_slice(T, rule=rule)
    R = (T * T - 1.0) / 2.0
    assert sl.integrate(np.ones(sl.n_nodes)) == pytest.approx(4.0 / 3.0 * math.pi * R ** 3, rel=rel)
    np.testing.assert_allclose(sl.times, np.sqrt(T * T + sl.radii ** 2))


def test_exterior_slice_starts_at_cone():
    T = 4.0
    sl = build_slice(T, Region.exterior(), n_nodes=64)
    assert np.all(sl.radii >= T / math.sqrt(3.0))
    assert np.all(sl.radii <= (T * T - 1.0) / 2.0)


def test_vertex_slice():
    sl = build_slice(1.0)
    assert sl.n_nodes == 1
    assert sl.radii[0] == 0.0
    assert sl.times[0] == pytest.approx(1.0)
    assert sl.integrate(np.ones(1)) == 0.0


def test_build_slice_errors():
    with pytest.raises(EmptySliceError):
        build_slice(0.9)
    with pytest.raises(ConfigurationError):
        build_slice(3.0, n_nodes=4)
    with pytest.raises(ConfigurationError):
        build_slice(3.0, rule="simpson")
    with pytest.raises(EmptySliceError):
        build_slice(5.0, Region.slab(2.0, 3.0))


def test_slice_3d_volume():
    T = 3.0
    grid = build_slice_3d(T, n_radial=32, n_polar=8, n_azimuthal=8)
    R = (T * T - 1.0) / 2.0
    assert grid.weights.sum() == pytest.approx(4.0 / 3.0 * math.pi * R ** 3, rel=1e-8)
    t = grid.points[:, 0]
    r = np.linalg.norm(grid.points[:, 1:], axis=1)
    np.testing.assert_allclose(t * t - r * r, T * T, rtol=1e-12)
