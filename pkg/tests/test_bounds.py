import pytest

from core.errors import UnknownIdentityError, ValidationError
from services.identities import check_commutator_bound, list_lemmas


def test_lemma_catalog():
    assert list_lemmas() == ["H-partial", "H-par_b", "H-T/t", "H-tangential", "Z-partial"]


@pytest.mark.parametrize("lemma_id", ["H-partial", "H-T/t", "Z-partial"])
def test_order_zero_constant_vanishes(lemma_id, gauss_field):
    report = check_commutator_bound(lemma_id, gauss_field, 0, n_samples=10)
    assert report.constant == 0.0
    assert report.passed


def test_single_boost_commutator_constant_at_most_one(gauss_field):
    # [H_j, d_a] is a single partial derivative
    report = check_commutator_bound("H-partial", gauss_field, 1, n_samples=15)
    assert report.finite
    assert report.constant_refined <= 1.0 + 1e-9
    assert report.passed


def test_unknown_lemma(gauss_field):
    with pytest.raises(UnknownIdentityError):
        check_commutator_bound("H-nothing", gauss_field, 1)


def test_order_out_of_range(gauss_field):
    with pytest.raises(ValidationError):
        check_commutator_bound("Z-partial", gauss_field, 3)
