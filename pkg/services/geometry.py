"""
Hyperboloidal foliation service: coordinates, regions, measures and slice quadrature
"""
from typing import Optional, Union

import numpy as np

from core.config import settings, QUADRATURE_RULES
from core.errors import DomainError, EmptySliceError, ConfigurationError
from core.logging import logger
from models.geometry import Region, RegionKind, HyperboloidSlice, SliceGrid3D, SpacetimePoint
from schemas.checks import BoundsReport

ArrayLike = Union[float, np.ndarray]


def hyperboloid_time(T: float, x: ArrayLike) -> ArrayLike:
    """
    Time coordinate of the point of H_T above the spatial point x

    x may be a radius, a 3-vector or an (n, 3) array of positions.
    """
    if T <= 0:
        raise DomainError(f"Hyperboloid radius must be positive, got {T}", {"T": T})
    x = np.asarray(x, dtype=float)
    if x.ndim == 0:
        r2 = x * x
    else:
        r2 = np.sum(x * x, axis=-1)
    t = np.sqrt(T * T + r2)
    return float(t) if np.ndim(t) == 0 else t


def lorentz_radius(p: SpacetimePoint) -> float:
    """T = sqrt(t^2 - r^2) for a point strictly inside the light cone"""
    r = p.r
    if p.t <= r:
        raise DomainError(
            f"Point (t={p.t}, r={r}) is not inside the light cone",
            {"t": p.t, "r": r}
        )
    return float(np.sqrt((p.t - r) * (p.t + r)))


def area_element_factor(t: ArrayLike, r: ArrayLike) -> ArrayLike:
    """Ratio d(sigma)/dx = t^{-1} sqrt(t^2 + r^2) of the intrinsic area element"""
    t = np.asarray(t, dtype=float)
    r = np.asarray(r, dtype=float)
    if np.any(t <= 0):
        raise DomainError("Area element requires t > 0")
    factor = np.sqrt(t * t + r * r) / t
    return float(factor) if factor.ndim == 0 else factor


def region_bounds_check(T: float, region: Region, n_samples: int = 2048) -> BoundsReport:
    """
    Sample H_T inside the region and check the t-range statements

    Lambda' (T >= 1): T <= t <= T^2. Interior cone: T <= t <= sqrt(2) T.
    """
    if T <= 0:
        raise DomainError(f"Hyperboloid radius must be positive, got {T}", {"T": T})
    lo, hi = region.radial_extent(T)
    if hi < lo:
        return BoundsReport(T=T, region=region.kind.value, n_samples=0, t_min=None,
                            t_max=None, upper_bound=None, worst_violation=0.0, passed=True)

    radii = np.linspace(lo, hi, max(n_samples, 2)) if hi > lo else np.array([lo])
    t = np.sqrt(T * T + radii * radii)

    if region.kind == RegionKind.INTERIOR:
        upper = np.sqrt(2.0) * T
    else:
        if T < 1:
            raise DomainError("The Lambda' bound needs T >= 1", {"T": T})
        upper = T * T

    violation = float(max(np.max(t - upper), np.max(T - t), 0.0))
    report = BoundsReport(
        T=T,
        region=region.kind.value,
        n_samples=int(radii.size),
        t_min=float(t.min()),
        t_max=float(t.max()),
        upper_bound=float(upper),
        worst_violation=violation,
        passed=violation <= 1e-12 * max(T * T, 1.0),
    )
    logger.debug(
        f"Region bounds on H_{T}: t in [{report.t_min:.6f}, {report.t_max:.6f}]",
        region=region.kind.value,
        worst_violation=violation
    )
    return report


def build_slice(
    T: float,
    region: Optional[Region] = None,
    n_nodes: Optional[int] = None,
    rule: Optional[str] = None,
    r_max: Optional[float] = None,
) -> HyperboloidSlice:
    """
    Radial quadrature nodes on H_T

    The weights approximate the dx integral 4*pi * int g(r) r^2 dr over the
    radial extent of the region, optionally cut at r_max. A region that
    shrinks to a point (H_1 in Lambda') gives one node of zero weight.
    """
    region = region or Region.lambda_prime()
    n_nodes = n_nodes or settings.SLICE_NODES
    rule = rule or settings.QUADRATURE

    if T <= 0:
        raise DomainError(f"Hyperboloid radius must be positive, got {T}", {"T": T})
    if n_nodes < 8:
        raise ConfigurationError(f"Need at least 8 slice nodes, got {n_nodes}", {"n_nodes": n_nodes})
    if rule not in QUADRATURE_RULES:
        raise ConfigurationError(f"Unknown quadrature rule: {rule}", {"rule": rule})

    lo, hi = region.radial_extent(T)
    if r_max is not None:
        hi = min(hi, r_max)
    if hi < lo:
        raise EmptySliceError(
            f"H_{T} has no nodes in region {region.kind.value}",
            {"T": T, "region": region.kind.value, "r_lo": lo, "r_hi": hi}
        )
    if hi == lo:
        # degenerate region: the vertex alone, zero measure
        return HyperboloidSlice(T=float(T), region=region, radii=np.array([float(lo)]),
                                weights=np.array([0.0]), rule=rule, r_max=float(hi))

    if rule == "midpoint":
        h = (hi - lo) / n_nodes
        radii = lo + (np.arange(n_nodes) + 0.5) * h
        weights = 4.0 * np.pi * radii * radii * h
    else:
        nodes, w = np.polynomial.legendre.leggauss(n_nodes)
        half = 0.5 * (hi - lo)
        radii = lo + half * (nodes + 1.0)
        weights = 4.0 * np.pi * radii * radii * half * w

    return HyperboloidSlice(T=float(T), region=region, radii=radii, weights=weights,
                            rule=rule, r_max=float(hi))


def build_slice_3d(
    T: float,
    region: Optional[Region] = None,
    n_radial: int = 48,
    n_polar: int = 16,
    n_azimuthal: int = 32,
) -> SliceGrid3D:
    """
    Full 3-D tensor-product grid on H_T

    The radial direction is parametrised by y = r/t in [0, y_max), so the
    grid follows boost-invariant profiles at every T; r = T y / sqrt(1 - y^2).
    """
    region = region or Region.lambda_prime()
    lo, hi = region.radial_extent(T)
    if not hi > lo:
        raise EmptySliceError(f"H_{T} has no nodes in region {region.kind.value}", {"T": T})

    def to_y(r):
        return r / np.sqrt(T * T + r * r)

    y_lo, y_hi = to_y(lo), to_y(hi)
    yn, yw = np.polynomial.legendre.leggauss(n_radial)
    y = y_lo + 0.5 * (y_hi - y_lo) * (yn + 1.0)
    yw = 0.5 * (y_hi - y_lo) * yw
    s = np.sqrt(1.0 - y * y)
    r = T * y / s
    drdy = T / s ** 3

    mu, mw = np.polynomial.legendre.leggauss(n_polar)
    phi = 2.0 * np.pi * np.arange(n_azimuthal) / n_azimuthal
    pw = np.full(n_azimuthal, 2.0 * np.pi / n_azimuthal)

    R, MU, PHI = np.meshgrid(r, mu, phi, indexing="ij")
    W = (yw * drdy * r * r)[:, None, None] * mw[None, :, None] * pw[None, None, :]
    sin_theta = np.sqrt(1.0 - MU * MU)
    x1 = R * sin_theta * np.cos(PHI)
    x2 = R * sin_theta * np.sin(PHI)
    x3 = R * MU
    t = np.sqrt(T * T + R * R)

    points = np.stack([t.ravel(), x1.ravel(), x2.ravel(), x3.ravel()], axis=1)
    if lo == 0.0:
        vertex = np.array([[T, 0.0, 0.0, 0.0]])
        points = np.vstack([vertex, points])
        weights = np.concatenate([[0.0], W.ravel()])
    else:
        weights = W.ravel()
    return SliceGrid3D(T=float(T), points=points, weights=weights)
