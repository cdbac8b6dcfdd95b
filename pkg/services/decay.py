"""
Decay-rate fitting on log-log axes
"""
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.stats import linregress

from core.errors import FitError
from core.logging import logger
from schemas.checks import DecayDiagnostic, DecayFit

MIN_POINTS = 5
ROUNDOFF_FACTOR = 64

DIAGNOSTIC_METRICS = {
    "sup_bar": "lambda",
    "sup_weighted": "lambda",
    "sup_mass": "lambda",
    "sup_good": "exterior",
    "sup_interior": "interior",
    "sup_envelope": "interior",
}


def _slope_stderr(x: np.ndarray, y: np.ndarray, slope: float, intercept: float) -> float:
    """Standard error of the slope from the residuals; 0 when they are round-off"""
    resid = y - (slope * x + intercept)
    if np.max(np.abs(resid)) <= ROUNDOFF_FACTOR * np.finfo(float).eps * max(float(np.max(np.abs(y))), 1.0):
        return 0.0
    sxx = float(np.sum((x - x.mean()) ** 2))
    return float(np.sqrt(np.sum(resid * resid) / (x.size - 2) / sxx))


def decay_fit(series: Iterable[Tuple[float, float]], metric: str = "sup",
              region: str = "lambda", component: int = 0) -> DecayFit:
    """Least-squares slope of log(value) against log(T) with its standard error"""
    points = [(float(T), float(v)) for T, v in series]
    if len(points) < MIN_POINTS:
        raise FitError(f"Decay fit needs at least {MIN_POINTS} points, got {len(points)}",
                       {"metric": metric, "n_points": len(points)})
    T = np.array([p[0] for p in points])
    values = np.array([p[1] for p in points])
    if np.any(T <= 0) or np.any(values <= 0) or not np.all(np.isfinite(values)):
        raise FitError("Decay fit needs positive finite values", {"metric": metric})
    if np.ptp(T) == 0:
        raise FitError("Decay fit needs at least two distinct T", {"metric": metric})

    x, y = np.log(T), np.log(values)
    if np.ptp(y) == 0:
        slope, stderr, intercept = 0.0, 0.0, float(y[0])
    else:
        res = linregress(x, y)
        slope, intercept = float(res.slope), float(res.intercept)
        stderr = _slope_stderr(x, y, slope, intercept)

    fit = DecayFit(metric=metric, region=region, component=component, exponent=slope,
                   stderr=stderr, intercept=intercept, n_points=len(points))
    logger.debug(f"Decay fit {metric}", region=region, exponent=slope, stderr=stderr)
    return fit


def fit_diagnostics(diagnostics: Sequence[DecayDiagnostic],
                    metrics: Optional[Sequence[str]] = None) -> List[DecayFit]:
    """Fit every metric that has enough positive values across the ladder"""
    fits = []
    for metric in metrics or DIAGNOSTIC_METRICS:
        by_component = {}
        for d in diagnostics:
            value = getattr(d, metric)
            if value is not None and value > 0:
                by_component.setdefault(d.component, []).append((d.T, value))
        for component, series in sorted(by_component.items()):
            if len(series) < MIN_POINTS:
                logger.debug(f"Not enough points to fit {metric}", component=component, n=len(series))
                continue
            fits.append(decay_fit(series, metric, DIAGNOSTIC_METRICS[metric], component))
    return fits
