"""
Hyperboloid slices of an evolution run

Snapshots are splined in r (clamped to even parity at the axis) and joined in
t by cubic Hermite interpolation using the stored time derivatives.
"""
import weakref
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy.interpolate import CubicSpline

from core.errors import CoverageError, ValidationError
from core.logging import logger
from models.geometry import HyperboloidSlice, Region
from models.state import FieldJetOnSlice, RunRecord
from services.geometry import build_slice

COVERAGE_SLACK = 1e-9

_SplineSet = Dict[str, CubicSpline]


class SnapshotInterpolator:
    """Lazily builds and caches the radial splines of every snapshot"""

    def __init__(self, record: RunRecord):
        self.record = record
        self.times = record.times
        self._splines: Dict[int, _SplineSet] = {}

    def splines(self, index: int) -> _SplineSet:
        if index not in self._splines:
            snap = self.record.snapshots[index]
            r = self.record.grid.r
            zero = np.zeros(snap.u.shape[0])
            bc = ((1, zero), "not-a-knot")
            self._splines[index] = {
                "u": CubicSpline(r, snap.u, axis=1, bc_type=bc),
                "u_t": CubicSpline(r, snap.u_t, axis=1, bc_type=bc),
                "u_tt": CubicSpline(r, snap.u_tt, axis=1, bc_type=bc),
            }
        return self._splines[index]

    def evaluate(self, t: np.ndarray, r: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """u, u_t, u_r at the points (t_k, r_k); each result has shape (n_components, n_points)"""
        times = self.times
        n_comp = self.record.spec.n
        u = np.zeros((n_comp, t.size))
        u_t = np.zeros_like(u)
        u_r = np.zeros_like(u)

        if times.size == 1:
            spl = self.splines(0)
            return spl["u"](r), spl["u_t"](r), spl["u"](r, 1)

        interval = np.clip(np.searchsorted(times, t, side="right") - 1, 0, times.size - 2)
        for m in np.unique(interval):
            sel = interval == m
            rr = r[sel]
            h = times[m + 1] - times[m]
            s = (t[sel] - times[m]) / h
            h00 = 2 * s ** 3 - 3 * s ** 2 + 1
            h10 = s ** 3 - 2 * s ** 2 + s
            h01 = -2 * s ** 3 + 3 * s ** 2
            h11 = s ** 3 - s ** 2
            a, b = self.splines(m), self.splines(m + 1)

            def hermite(p0, m0, p1, m1):
                return h00 * p0 + h10 * h * m0 + h01 * p1 + h11 * h * m1

            u[:, sel] = hermite(a["u"](rr), a["u_t"](rr), b["u"](rr), b["u_t"](rr))
            u_t[:, sel] = hermite(a["u_t"](rr), a["u_tt"](rr), b["u_t"](rr), b["u_tt"](rr))
            u_r[:, sel] = hermite(a["u"](rr, 1), a["u_t"](rr, 1), b["u"](rr, 1), b["u_t"](rr, 1))
        return u, u_t, u_r


_INTERPOLATORS: "weakref.WeakKeyDictionary[RunRecord, SnapshotInterpolator]" = weakref.WeakKeyDictionary()


def interpolator_for(record: RunRecord) -> SnapshotInterpolator:
    interp = _INTERPOLATORS.get(record)
    if interp is None or interp.times.size != len(record.snapshots):
        interp = SnapshotInterpolator(record)
        _INTERPOLATORS[record] = interp
    return interp


def coverage(record: RunRecord) -> Tuple[float, float]:
    """Time interval spanned by the stored snapshots"""
    if not record.snapshots:
        return record.t_start, record.t_start
    return float(record.snapshots[0].t), float(record.snapshots[-1].t)


def covers(record: RunRecord, T: float, region: Optional[Region] = None) -> bool:
    region = region or Region.lambda_prime()
    lo, hi = region.radial_extent(T)
    if hi < lo:
        return False
    t_lo, t_hi = np.hypot(T, lo), np.hypot(T, hi)
    c_lo, c_hi = coverage(record)
    return (t_lo >= c_lo - COVERAGE_SLACK and t_hi <= c_hi + COVERAGE_SLACK
            and hi <= record.grid.r_max)


def _require_coverage(record: RunRecord, slice_: HyperboloidSlice) -> None:
    t_lo, t_hi = slice_.t_extent
    c_lo, c_hi = coverage(record)
    if t_lo < c_lo - COVERAGE_SLACK or t_hi > c_hi + COVERAGE_SLACK:
        raise CoverageError(
            f"Run covers t in [{c_lo:.4f}, {c_hi:.4f}] but H_{slice_.T} "
            f"({slice_.region.kind.value}) needs [{t_lo:.4f}, {t_hi:.4f}]",
            {"T": slice_.T, "needed": [t_lo, t_hi], "covered": [c_lo, c_hi],
             "truncated": record.truncated}
        )
    if slice_.r_max > record.grid.r_max:
        raise CoverageError("Slice leaves the radial grid", {"T": slice_.T, "r_max": record.grid.r_max})


def interpolate_all(
    record: RunRecord,
    T: float,
    region: Optional[Region] = None,
    n_nodes: Optional[int] = None,
    rule: Optional[str] = None,
) -> List[FieldJetOnSlice]:
    """Jets of every component on H_T restricted to the region"""
    slice_ = build_slice(T, region or Region.lambda_prime(), n_nodes, rule)
    _require_coverage(record, slice_)
    t = np.clip(slice_.times, record.snapshots[0].t, record.snapshots[-1].t)
    u, u_t, u_r = interpolator_for(record).evaluate(t, slice_.radii)
    jets = [
        FieldJetOnSlice.radial(slice_, u[i], u_t[i], u_r[i], record.spec.masses[i])
        for i in range(record.spec.n)
    ]
    logger.debug(f"Interpolated run onto H_{T}", run_id=record.run_id,
                 region=slice_.region.kind.value, n_nodes=slice_.n_nodes)
    return jets


def interpolate_to_hyperboloid(
    record: RunRecord,
    T: float,
    component: int = 0,
    region: Optional[Region] = None,
    n_nodes: Optional[int] = None,
    rule: Optional[str] = None,
) -> FieldJetOnSlice:
    """Jet of one component on H_T"""
    if not 0 <= component < record.spec.n:
        raise ValidationError(f"Component {component} outside 0..{record.spec.n - 1}")
    return interpolate_all(record, T, region, n_nodes, rule)[component]


def bridge_to_first_hyperboloid(
    record: RunRecord,
    B: float,
    n_nodes: Optional[int] = None,
    rule: Optional[str] = None,
) -> List[FieldJetOnSlice]:
    """
    Jets on the initial hyperboloid H_{B+1}

    Its part inside Lambda' spans t in [B + 1, ((B + 1)^2 + 1)/2].
    """
    return interpolate_all(record, B + 1.0, Region.lambda_prime(), n_nodes, rule)
