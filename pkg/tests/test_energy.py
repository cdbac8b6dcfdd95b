import numpy as np
import pytest
import sympy as sp

from cli.commands.sobolev import SOBOLEV_VARIATION, ratio_variation
from conftest import RUN_B
from core.errors import CoverageError, SymmetryError, ValidationError
from models.field import ScalarField
from models.state import FieldJetOnSlice
from services.energy import (
    boost_words, bridge_comparability, decay_diagnostic, energy_curved, energy_em,
    energy_identity_battery, energy_inequality_check, radial_gaussian_jet, sobolev_profiles,
    sobolev_ratio, tangential_bound_check, tangential_pointwise_factor, toy_G, toy_metric_perturbation,
)
from services.geometry import build_slice


def test_three_integrands_agree_on_random_states():
    report = energy_identity_battery(n_states=500, seed=1)
    assert report.passed
    assert report.max_pointwise_spread <= 1e-12


def test_energy_of_a_massive_jet_is_consistent():
    jet = radial_gaussian_jet(4.0, incoming=False, mass=1.0)
    report = energy_em(jet, T=4.0)
    assert report.E_m > 0
    assert report.mass_term > 0
    assert report.spread < 1e-9


def test_zero_jet_has_zero_energy():
    report = energy_em(FieldJetOnSlice.zero(build_slice(3.0)))
    assert report.E_m == 0.0
    assert report.spread == 0.0


def test_pointwise_spread_ignores_underflowing_nodes():
    sl = build_slice(3.0, n_nodes=16)
    u_r = np.full(sl.n_nodes, 1e-160)
    u_r[0] = 1.0
    zeros = np.zeros(sl.n_nodes)
    report = energy_em(FieldJetOnSlice.radial(sl, zeros, zeros, u_r))
    assert report.E_m > 0
    assert report.pointwise_spread < 1e-12


def test_energy_on_wrong_hyperboloid():
    jet = radial_gaussian_jet(3.0)
    with pytest.raises(ValidationError):
        energy_em(jet, T=3.5)


@pytest.mark.parametrize("T", [3.0, 5.0, 8.0])
def test_incoming_jet_respects_tangential_bound(T):
    report = tangential_bound_check(radial_gaussian_jet(T, incoming=True))
    assert report.passed
    assert 1.0 < report.ratio <= 2.0


def test_static_jet_has_tangential_ratio_one():
    report = tangential_bound_check(radial_gaussian_jet(5.0, incoming=False))
    assert report.ratio == pytest.approx(1.0, rel=1e-9)


def test_tangential_pointwise_factor():
    assert tangential_pointwise_factor(0.0) == pytest.approx(2.0)
    assert tangential_pointwise_factor(0.5) == pytest.approx(4.0 / 3.0)
    with pytest.raises(ValidationError):
        tangential_pointwise_factor(1.0)


def test_toy_metric_scales_massless_energy():
    g = 0.05
    jet = radial_gaussian_jet(4.0)
    G = toy_G(jet.slice.n_nodes, toy_metric_perturbation(1, g))
    report = energy_curved([jet], G)
    assert report.E_G[0] == pytest.approx((1.0 + g) * report.E_m[0], rel=1e-10)
    assert report.comparable


def test_curved_energy_without_G_is_flat_energy():
    jet = radial_gaussian_jet(3.0)
    report = energy_curved([jet])
    assert report.E_G[0] == pytest.approx(report.E_m[0])


def test_curved_energy_rejects_asymmetric_G():
    jet = radial_gaussian_jet(3.0)
    G = np.zeros((jet.slice.n_nodes, 1, 1, 4, 4))
    G[:, 0, 0, 0, 1] = 0.1
    with pytest.raises(SymmetryError):
        energy_curved([jet], G)
    with pytest.raises(ValidationError):
        energy_curved([jet], np.zeros((3, 1, 1, 4, 4)))


def test_free_wave_energy_inequality(free_wave_record):
    rows = energy_inequality_check(free_wave_record, [3.25, 3.5], B=RUN_B)
    assert [row.T for row in rows] == [3.25, 3.5]
    for row in rows:
        assert row.source_integral == 0.0
        assert row.margin >= -0.01


def test_inequality_skips_uncovered_slices(free_wave_record):
    rows = energy_inequality_check(free_wave_record, [3.25, 6.0], B=RUN_B)
    assert [row.T for row in rows] == [3.25]


def test_bridge_energies_are_comparable(free_wave_record):
    assert bridge_comparability(free_wave_record, RUN_B) == pytest.approx(1.0, abs=0.02)


def test_decay_diagnostic_fills_covered_regions(free_wave_record):
    d = decay_diagnostic(free_wave_record, 4.0)
    assert d.sup_bar is None
    assert d.sup_good is None
    assert d.sup_interior is not None and d.sup_interior > 0
    assert d.sup_envelope is None

    full = decay_diagnostic(free_wave_record, 3.5)
    assert full.sup_bar is not None and full.sup_weighted is not None
    assert full.sup_mass == 0.0


def test_decay_diagnostic_outside_run(free_wave_record):
    with pytest.raises(CoverageError):
        decay_diagnostic(free_wave_record, 6.5)


def test_boost_words():
    words = boost_words(2)
    assert len(words) == 13
    assert len(words[0]) == 0


def test_sobolev_ratio_is_scale_invariant():
    f = sobolev_profiles()[0]
    a = sobolev_ratio(f, 4.0, n_radial=12, n_polar=6, n_azimuthal=8)
    b = sobolev_ratio(f.scaled(3.0), 4.0, n_radial=12, n_polar=6, n_azimuthal=8)
    assert a.ratio > 0
    assert b.ratio == pytest.approx(a.ratio, rel=1e-10)


@pytest.mark.slow
def test_sobolev_ratio_is_flat_across_T():
    rows = [sobolev_ratio(f, T) for f in sobolev_profiles() for T in (4.0, 8.0, 16.0, 32.0)]
    variations = ratio_variation(rows)
    assert sorted(variations) == ["centered", "offset", "tilted"]
    assert all(v < SOBOLEV_VARIATION for v in variations.values())


def test_sobolev_ratio_of_zero_field():
    row = sobolev_ratio(ScalarField(sp.Integer(0), order=2, name="zero"), 4.0)
    assert row.ratio == 0.0
