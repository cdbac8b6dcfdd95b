import pytest

from core.errors import DerivativeOrderError, UnknownIdentityError
from models.field import ScalarField, t_sym
from services.identities import (
    battery_passed, check_commutator, get_identity, identity_registry, run_identity_battery,
)

CHECKED_IDS = identity_registry.ids(include_informational=False)
INFORMATIONAL_IDS = [i for i in identity_registry.ids() if i not in CHECKED_IDS]


def test_registry_lists_at_least_twelve_identities():
    assert len(CHECKED_IDS) >= 12
    assert sorted(INFORMATIONAL_IDS) == ["H-T/t-dx-printed", "H-bar-printed", "good-minus-bar-printed"]


def test_unknown_identity():
    with pytest.raises(UnknownIdentityError):
        get_identity("H-nothing")


@pytest.mark.parametrize("identity_id", CHECKED_IDS)
def test_identity_holds(identity_id, gauss_field, lambda_points, exterior_points):
    points = exterior_points if get_identity(identity_id).region == "exterior" else lambda_points
    result = check_commutator(identity_id, gauss_field, points)
    assert result.passed, f"{identity_id}: residual {result.max_residual:.3e}"
    assert not result.informational


@pytest.mark.parametrize("identity_id", ["H-bar-printed", "good-minus-bar-printed"])
def test_printed_forms_differ_from_exact_algebra(identity_id, wide_field, lambda_points, exterior_points):
    points = exterior_points if get_identity(identity_id).region == "exterior" else lambda_points
    result = check_commutator(identity_id, wide_field, points)
    assert result.informational
    assert not result.passed


def test_battery_ignores_informational_failures(wide_field):
    results = run_identity_battery([wide_field], n_samples=20, seed=2)
    assert battery_passed(results)
    assert any(r.informational and not r.passed for r in results)


def test_unreachable_tolerance_fails(gauss_field):
    results = run_identity_battery([gauss_field], n_samples=10, tol=1e-20,
                                   identity_ids=["H-wave", "H-bar", "H-good"])
    assert not battery_passed(results)


def test_tolerance_is_absolute(wide_field, lambda_points):
    result = check_commutator("H-bar-printed", wide_field, lambda_points)
    assert result.max_residual > 0
    assert check_commutator("H-bar-printed", wide_field, lambda_points, tol=result.max_residual).passed
    assert not check_commutator("H-bar-printed", wide_field, lambda_points, tol=0.5 * result.max_residual).passed


def test_identity_needs_derivative_budget(lambda_points):
    f = ScalarField(t_sym ** 3, order=2, name="cubic")
    with pytest.raises(DerivativeOrderError):
        check_commutator("H-wave", f, lambda_points)
