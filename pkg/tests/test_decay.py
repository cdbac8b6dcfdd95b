import numpy as np
import pytest

from core.errors import FitError
from schemas.checks import DecayDiagnostic
from services.decay import MIN_POINTS, decay_fit, fit_diagnostics

LADDER = [4.0, 6.0, 8.0, 12.0, 16.0, 24.0]


def test_power_law_exponent():
    fit = decay_fit([(T, 3.0 * T ** -1.5) for T in LADDER], "sup_envelope", "interior")
    assert fit.exponent == pytest.approx(-1.5)
    assert fit.intercept == pytest.approx(np.log(3.0))
    assert fit.stderr == pytest.approx(0.0, abs=1e-10)
    assert fit.n_points == len(LADDER)


def test_noisy_power_law_reports_spread():
    grid = np.linspace(5.0, 40.0, 15)
    fit = decay_fit([(T, T ** -1.5 * (1.0 + 0.1 * np.sin(T))) for T in grid], "sup_envelope", "interior")
    assert fit.exponent == pytest.approx(-1.5, abs=0.05)
    assert fit.stderr > 1e-4


def test_constant_series_has_zero_exponent():
    fit = decay_fit([(T, 0.7) for T in LADDER])
    assert fit.exponent == 0.0
    assert fit.stderr == 0.0


@pytest.mark.parametrize("series", [
    [(T, 1.0) for T in LADDER[:MIN_POINTS - 1]],
    [(T, 0.0 if T == 8.0 else 1.0) for T in LADDER],
    [(T, float("nan")) for T in LADDER],
    [(5.0, v) for v in (1.0, 2.0, 3.0, 4.0, 5.0)],
])
def test_unfittable_series(series):
    with pytest.raises(FitError):
        decay_fit(series)


def test_fit_diagnostics_picks_filled_metrics():
    diags = [
        DecayDiagnostic(T=T, sup_bar=T ** -0.5, sup_interior=None if T < 8 else T ** -1.0)
        for T in LADDER
    ]
    fits = fit_diagnostics(diags)
    assert [f.metric for f in fits] == ["sup_bar"]
    assert fits[0].region == "lambda"
    assert fits[0].exponent == pytest.approx(-0.5)

    assert fit_diagnostics(diags, ["sup_good"]) == []
