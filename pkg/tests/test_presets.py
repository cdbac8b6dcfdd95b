import pytest

from cli.commands.decay import check_decay, variation
from conftest import RUN_B
from core.config import DEFAULT_LADDERS, PRESETS
from core.errors import PresetError
from schemas.checks import LifespanRow
from schemas.config import RunConfig
from services.nullcond import q0_form
from services.reports import decay_series
from services.presets import (
    PRESET_REGISTRY, bootstrap_monitor, build_spec, default_t_final, first_violation, get_preset,
    ladder_for, lifespan_monotone, manufactured_inequality, manufactured_refinement, null_contrast,
    run_preset,
)
from services.tensor_io import dump_tensors


def test_registry_matches_configured_presets():
    assert sorted(PRESET_REGISTRY) == sorted(PRESETS)
    assert sorted(DEFAULT_LADDERS) == sorted(PRESETS)


def test_unknown_preset():
    with pytest.raises(PresetError):
        get_preset("burgers")


@pytest.mark.parametrize("name,expected", [("free_wave", 73.0), ("free_kg", 93.0)])
def test_default_end_time_covers_ladder(name, expected):
    config = RunConfig(preset=name)
    assert default_t_final(config, ladder_for(config)) == pytest.approx(expected)


def test_ladder_override():
    config = RunConfig(T_ladder="3:4:0.5")
    assert ladder_for(config) == [3.0, 3.5, 4.0]
    assert ladder_for(RunConfig(preset="null_wave")) == DEFAULT_LADDERS["null_wave"]


def test_preset_spec():
    spec = build_spec(RunConfig(preset="coupled_wkg"))
    assert spec.masses == (0.0, 1.0)
    assert spec.tensors.coupled
    assert not spec.quasilinear
    assert build_spec(RunConfig(toy_G=0.05)).quasilinear


def test_tensor_file_overrides_preset(tmp_path):
    path = tmp_path / "q0.txt"
    path.write_text(dump_tensors(q0_form()), encoding="utf-8")
    spec = build_spec(RunConfig(preset="nonnull_wave", tensors_file=str(path)))
    assert spec.name == "nonnull_wave:file"
    assert spec.tensors.equals(q0_form())


def test_bootstrap_on_free_wave(free_wave_record):
    rows = bootstrap_monitor(free_wave_record, [3.25, 3.5, 6.0], epsilon=0.01, B=RUN_B)
    assert [row.s for row in rows] == [3.25, 3.5]
    assert all(row.kind == "wave" and row.passed for row in rows)
    assert first_violation(rows) is None


def test_bootstrap_reference(free_wave_record):
    with pytest.raises(PresetError):
        bootstrap_monitor(free_wave_record, [3.25], epsilon=0.01, reference="energy")


def test_lifespan_monotone():
    rows = [LifespanRow(epsilon=0.5, truncated=True, lifespan=4.0),
            LifespanRow(epsilon=0.2, truncated=False, lifespan=9.0),
            LifespanRow(epsilon=1.0, truncated=True, lifespan=3.5)]
    assert lifespan_monotone(rows)
    rows.append(LifespanRow(epsilon=2.0, truncated=True, lifespan=3.8))
    assert not lifespan_monotone(rows)


def test_free_wave_preset_reports():
    config = RunConfig(dr=0.05, T_ladder=[3.0, 3.25, 3.5, 3.75, 4.0])
    result = run_preset("free_wave", 0.01, config)
    assert not result.truncated
    assert result.uncovered == []
    assert result.inequality and all(row.passed for row in result.inequality)
    assert len(result.slice_rows) == 5
    assert all(row.margin is not None for row in result.slice_rows)
    assert {fit.metric for fit in result.fits} >= {"sup_bar", "sup_weighted"}
    assert result.bridge_ratio == pytest.approx(1.0, abs=0.02)
    assert result.record.run_id == result.record.config_hash[:12]


@pytest.mark.slow
def test_manufactured_wave_inequality():
    rows = manufactured_inequality(RunConfig(dr=0.05), mass=0.0)
    assert rows
    assert all(row.passed for row in rows)
    assert all(row.source_integral > 0 for row in rows)


@pytest.mark.slow
def test_free_klein_gordon_envelope_decay():
    result = run_preset("free_kg", 0.01, RunConfig(dr=0.05))
    fit = next(f for f in result.fits if f.metric == "sup_envelope")
    assert fit.exponent == pytest.approx(-1.5, abs=0.2)
    series = decay_series(result.diagnostics, "sup_envelope", 0)
    assert len(series) == len(DEFAULT_LADDERS["free_kg"])
    assert check_decay("free_kg", "sup_envelope", series)


@pytest.mark.slow
def test_free_wave_weighted_sup_stays_bounded():
    result = run_preset("free_wave", 0.01, RunConfig(dr=0.05))
    series = decay_series(result.diagnostics, "sup_weighted", 0)
    assert len(series) == len(DEFAULT_LADDERS["free_wave"])
    assert variation([value for _, value in series]) < 0.3
    assert check_decay("free_wave", "sup_weighted", series)


def test_coupled_bootstrap_holds_on_short_ladder():
    result = run_preset("coupled_wkg", 0.01, RunConfig(dr=0.05, T_ladder="3:8:1"))
    assert not result.truncated
    assert result.bootstrap
    assert all(row.passed for row in result.bootstrap)
    assert {row.kind for row in result.bootstrap} == {"wave", "kg"}
    assert first_violation(result.bootstrap) is None


def test_curved_energy_comparable_on_evolved_fields():
    config = RunConfig(preset="coupled_wkg", dr=0.05, T_ladder="3:4:0.5", toy_G=0.05)
    result = run_preset("coupled_wkg", 0.01, config)
    assert len(result.curved) == 3
    assert all(report.comparable for report in result.curved)
    assert all(report.max_G <= 0.05 + 1e-12 for report in result.curved)


@pytest.mark.slow
def test_null_contrast_at_moderate_amplitude_is_undecided():
    report = null_contrast(0.3, RunConfig(dr=0.05))
    assert report.outcome == "none"
    assert not report.passed
    assert not report.nonnull_truncated
    assert report.T == 6.0
    assert report.ratio is not None and report.ratio < 2.0


@pytest.mark.slow
def test_manufactured_margin_holds_under_refinement():
    rows = manufactured_refinement(RunConfig(dr=0.04), mass=0.0)
    assert rows
    assert all(row.passed for row in rows)
    assert all(row.dr == 0.04 for row in rows)
