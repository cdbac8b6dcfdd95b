import numpy as np
import pytest

from core.errors import DomainError, ValidationError
from models.tensors import CoefficientTensors, NullVector
from services.nullcond import (
    CATALOG_EXPECTED, axis_null_vectors, check_null_condition, check_weak_null,
    check_weak_null_sampled, dt_squared_form, null_catalog, null_implies_weak_null,
    q0_form, sample_null_cone, underline_components,
)
from services.presets import coupled_wkg_tensors

CATALOG = null_catalog()


@pytest.mark.parametrize("name", sorted(CATALOG))
def test_classical_forms(name):
    result = check_null_condition(CATALOG[name], sample_null_cone(100))
    assert result.passed is CATALOG_EXPECTED[name]


@pytest.mark.parametrize("name", sorted(CATALOG))
def test_weak_null_follows_null(name):
    tensors = CATALOG[name]
    weak = check_weak_null_sampled(tensors, 50, mode="omega")
    if CATALOG_EXPECTED[name]:
        assert weak.passed
    assert null_implies_weak_null(tensors, 50)


def test_dt_squared_violates_both_conditions():
    tensors = dt_squared_form()
    null = check_null_condition(tensors, sample_null_cone(20))
    assert not null.passed
    assert null.worst_tensor == "P"
    assert null.relative_violation == pytest.approx(0.5)
    assert not check_weak_null_sampled(tensors, 20, mode="exterior").passed


def test_verdict_is_scale_invariant():
    tensors = dt_squared_form()
    scaled = tensors.replace(P=7.5 * tensors.P)
    a = check_null_condition(tensors, sample_null_cone(30))
    b = check_null_condition(scaled, sample_null_cone(30))
    assert a.passed == b.passed
    assert a.relative_violation == pytest.approx(b.relative_violation, rel=1e-12)


def test_underline_component_of_q0_vanishes():
    comps = underline_components(q0_form(), np.array([0.0, 0.6, 0.8]))
    assert np.max(np.abs(comps["P"])) < 1e-15


def test_coupled_wave_klein_gordon_preset_is_null():
    tensors = coupled_wkg_tensors()
    assert check_null_condition(tensors, sample_null_cone(60)).passed
    assert check_weak_null_sampled(tensors, 60, mode="exterior").passed


def test_zero_tensors_pass():
    assert check_null_condition(CoefficientTensors.zeros(2, 1), sample_null_cone(10)).passed


def test_sample_null_cone_is_deterministic_and_null():
    a = sample_null_cone(40, seed=4)
    b = sample_null_cone(40, seed=4)
    assert all(np.array_equal(x.xi, y.xi) for x, y in zip(a, b))
    assert [v.xi.tolist() for v in a[:12]] == [v.xi.tolist() for v in axis_null_vectors()]
    for v in a:
        assert abs(v.xi[0] ** 2 - np.dot(v.xi[1:], v.xi[1:])) < 1e-12 * v.norm ** 2


def test_sample_null_cone_needs_samples():
    with pytest.raises(DomainError):
        sample_null_cone(0)


def test_non_null_covector_rejected():
    with pytest.raises(ValidationError):
        NullVector(np.array([1.0, 0.5, 0.0, 0.0]))


def test_weak_null_point_needs_r_positive():
    with pytest.raises(DomainError):
        check_weak_null(q0_form(), [2.0, 0.0, 0.0, 0.0])


def test_unknown_weak_null_mode():
    with pytest.raises(DomainError):
        check_weak_null_sampled(q0_form(), 5, mode="interior")
