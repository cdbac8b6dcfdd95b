import json

from schemas.checks import DecayDiagnostic, SliceRow
from services.decay import fit_diagnostics
from services.executor import SweepExecutor
from services.reports import (
    SLICE_COLUMNS, decay_series, write_csv, write_decay_svg, write_metadata,
)

LADDER = [4.0, 5.0, 6.0, 8.0, 10.0]


def _diagnostics():
    return [DecayDiagnostic(T=T, sup_bar=2.0 * T ** -0.5, sup_interior=T ** -1.5) for T in LADDER]


def test_slice_csv_columns_and_bytes(tmp_path):
    rows = [SliceRow(T=3.0, component=0, E1=1.0 / 3.0, E2=1.0 / 3.0, E3=1.0 / 3.0, spread=0.0, mass_term=0.0)]
    a = write_csv(rows, tmp_path / "a.csv", SLICE_COLUMNS)
    b = write_csv(rows, tmp_path / "b.csv", SLICE_COLUMNS)
    text = a.read_text(encoding="utf-8")
    assert text.splitlines()[0] == ",".join(SLICE_COLUMNS)
    assert "0.333333333333" in text
    assert a.read_bytes() == b.read_bytes()


def test_decay_svg_is_reproducible(tmp_path):
    diags = _diagnostics()
    fits = fit_diagnostics(diags)
    a = write_decay_svg(diags, fits, tmp_path / "a.svg", title="free_wave")
    b = write_decay_svg(diags, fits, tmp_path / "b.svg", title="free_wave")
    assert a.read_bytes() == b.read_bytes()
    assert b"<svg" in a.read_bytes()


def test_decay_series_skips_missing_values():
    diags = _diagnostics() + [DecayDiagnostic(T=12.0, component=0)]
    assert [T for T, _ in decay_series(diags, "sup_bar", 0)] == LADDER
    assert decay_series(diags, "sup_bar", 1) == []


def test_metadata_is_sorted_json(tmp_path):
    path = write_metadata({"run_id": "abc", "truncated": False, "dr": 0.05}, tmp_path / "run.json")
    data = json.loads(path.read_text(encoding="utf-8"))
    assert list(data) == ["dr", "run_id", "truncated"]


def test_sweep_keeps_submission_order():
    jobs = [(base, 2) for base in range(6)]
    assert SweepExecutor(max_workers=3).map(pow, jobs) == [b * b for b in range(6)]
    assert SweepExecutor(max_workers=1).map(pow, jobs[:2]) == [0, 1]
    assert SweepExecutor().map(pow, []) == []
