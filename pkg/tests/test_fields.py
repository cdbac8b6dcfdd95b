import numpy as np
import pytest
import sympy as sp

from core.errors import DerivativeOrderError, DomainError, ValidationError
from models.field import FieldOperator, MultiIndex, ScalarField, t_sym, x1_sym
from services import fields as field_service


def test_apply_multi_runs_left_to_right(gauss_field, lambda_points):
    J = MultiIndex.of("H1", "D2")
    composed = field_service.apply_multi(J, gauss_field)
    by_hand = field_service.apply(FieldOperator.H1, field_service.apply(FieldOperator.D2, gauss_field))
    np.testing.assert_allclose(composed(lambda_points), by_hand(lambda_points), rtol=1e-12, atol=1e-15)
    assert composed.order == gauss_field.order - 2


def test_boost_of_time_is_position():
    f = ScalarField(t_sym, order=2, name="t")
    h = field_service.apply(FieldOperator.H1, f)
    assert sp.simplify(h.expr - x1_sym) == 0


def test_derivative_budget_is_enforced():
    f = ScalarField(t_sym ** 2, order=1, name="t2")
    once = field_service.apply(FieldOperator.D0, f)
    with pytest.raises(DerivativeOrderError):
        field_service.apply(FieldOperator.D0, once)
    with pytest.raises(DerivativeOrderError):
        field_service.apply_multi(MultiIndex.of("D0", "D1"), f)


def test_omega_operators_reject_axis_points():
    cone = field_service.cone_field()
    with pytest.raises(DomainError):
        cone(np.array([[3.0, 0.0, 0.0, 0.0]]))


def test_tangential_operator_rejects_nonpositive_time(gauss_field):
    f = field_service.apply(FieldOperator.Db1, gauss_field)
    with pytest.raises(DomainError):
        f(np.array([[0.0, 1.0, 0.0, 0.0]]))


def test_box_of_plane_wave_vanishes():
    f = ScalarField(sp.sin(t_sym - x1_sym), order=4, name="plane")
    assert sp.simplify(field_service.box(f).expr) == 0


@pytest.mark.parametrize("region", ["lambda", "exterior"])
def test_sample_points_inside_region(region):
    pts = field_service.sample_points(200, seed=3, region=region)
    t = pts[:, 0]
    r = np.linalg.norm(pts[:, 1:], axis=1)
    assert pts.shape == (200, 4)
    assert np.all(r > 0)
    assert np.all(r <= t - 1.0 + 1e-12)
    if region == "exterior":
        assert np.all(r >= t / 2.0 - 1e-12)


def test_sample_points_unknown_region():
    with pytest.raises(ValidationError):
        field_service.sample_points(5, region="everywhere")


def test_frame_matrices_are_inverse():
    assert field_service.check_frame_identity(50) < 1e-14


def test_two_tensor_frame_transform_inverts(rng):
    T = rng.normal(size=(4, 4))
    x = [1.0, -2.0, 0.5]
    U = field_service.frame_transform_two_tensor(T, x)
    np.testing.assert_allclose(field_service.inverse_frame_transform_two_tensor(U, x), T, atol=1e-13)


def test_frame_undefined_at_origin():
    with pytest.raises(DomainError):
        field_service.frame_matrices([0.0, 0.0, 0.0])


def test_scaled_field(gauss_field, lambda_points):
    np.testing.assert_allclose(gauss_field.scaled(3.0)(lambda_points), 3.0 * gauss_field(lambda_points))
