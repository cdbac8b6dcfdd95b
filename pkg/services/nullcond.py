"""
Null and weak-null conditions for quadratic coefficient tensors
"""
from typing import Dict, Iterable, List, Optional

import numpy as np

from core.config import settings
from core.errors import DomainError
from core.logging import logger, log_check_result
from models.field import FrameMatrices
from models.tensors import CoefficientTensors, NullVector
from schemas.checks import NullCheckResult
from services.fields import frame_transform, sample_points

# Plastic-number (R2) sequence constants
_G = 1.32471795724474602596
_A1 = 1.0 / _G
_A2 = 1.0 / (_G * _G)

DEGREES = {"A": 3, "B": 2, "P": 2}


def axis_null_vectors() -> List[NullVector]:
    """(+-1, +-e_i), starting with (1, 1, 0, 0)"""
    out = []
    for s0 in (1.0, -1.0):
        for i in range(3):
            for s in (1.0, -1.0):
                xi = np.zeros(4)
                xi[0] = s0
                xi[1 + i] = s
                out.append(NullVector(xi))
    return out


def sphere_directions(n: int, offset: int = 0) -> np.ndarray:
    """Low-discrepancy unit vectors; the k-th vector does not depend on n"""
    k = np.arange(offset, offset + n)
    u = (0.5 + _A1 * k) % 1.0
    v = (0.5 + _A2 * k) % 1.0
    z = 1.0 - 2.0 * u
    rho = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    phi = 2.0 * np.pi * v
    dirs = np.column_stack([rho * np.cos(phi), rho * np.sin(phi), z])
    return dirs / np.linalg.norm(dirs, axis=1)[:, None]


def sample_null_cone(n: int, seed: int = 0) -> List[NullVector]:
    """
    Deterministic null covectors: the 12 axis directions first, then
    lambda (+-1, omega) with omega from the sphere sequence and lambda in [0.5, 2]
    """
    if n < 1:
        raise DomainError("Need at least one null sample", {"n": n})
    axis = axis_null_vectors()
    if n <= len(axis):
        return axis[:n]
    extra = n - len(axis)
    rng = np.random.default_rng(seed)
    scales = rng.uniform(0.5, 2.0, extra)
    dirs = sphere_directions(extra)
    samples = list(axis)
    for k in range(extra):
        sign = 1.0 if k % 2 == 0 else -1.0
        samples.append(NullVector.from_direction(dirs[k], sign, scales[k]))
    return samples


def hat_blocks(tensors: CoefficientTensors) -> Dict[str, np.ndarray]:
    """Wave-wave blocks of A, B and P"""
    w = np.array(list(tensors.wave), dtype=int)
    return {
        "A": tensors.A[np.ix_(w, w, range(4), range(4), range(4), w)],
        "B": tensors.B[np.ix_(w, w, range(4), range(4), w)],
        "P": tensors.P[np.ix_(w, range(4), range(4), w, w)],
    }


def _contract(blocks: Dict[str, np.ndarray], xi: np.ndarray) -> Dict[str, float]:
    return {
        "A": float(np.max(np.abs(np.einsum("ijabgk,a,b,g->ijk", blocks["A"], xi, xi, xi)), initial=0.0)),
        "B": float(np.max(np.abs(np.einsum("ijabk,a,b->ijk", blocks["B"], xi, xi)), initial=0.0)),
        "P": float(np.max(np.abs(np.einsum("iabjk,a,b->ijk", blocks["P"], xi, xi)), initial=0.0)),
    }


def check_null_condition(
    tensors: CoefficientTensors,
    samples: Optional[Iterable[NullVector]] = None,
    tol: Optional[float] = None,
) -> NullCheckResult:
    """A xi xi xi = B xi xi = P xi xi = 0 on the wave-wave block for every sampled null xi"""
    tol = settings.NULL_TOL if tol is None else tol
    samples = list(samples) if samples is not None else sample_null_cone(100)
    K = tensors.scale
    blocks = hat_blocks(tensors)

    worst_abs, worst_rel, worst_name = 0.0, 0.0, None
    for sample in samples:
        values = _contract(blocks, sample.xi)
        for name, value in values.items():
            rel = value / (K * sample.norm ** DEGREES[name]) if K > 0 else 0.0
            worst_abs = max(worst_abs, value)
            if rel > worst_rel:
                worst_rel, worst_name = rel, name

    passed = worst_rel <= tol
    log_check_result("null_condition", passed, worst_rel, tol, n_samples=len(samples))
    return NullCheckResult(
        check="null",
        passed=passed,
        max_violation=worst_abs,
        relative_violation=worst_rel,
        n_samples=len(samples),
        tolerance=tol,
        worst_tensor=worst_name,
    )


def underline_components(tensors: CoefficientTensors, omega: np.ndarray) -> Dict[str, np.ndarray]:
    """All-zero-index components of the hat blocks in the null frame at omega"""
    frame = FrameMatrices.at(omega)
    blocks = hat_blocks(tensors)
    return {
        "A": frame_transform(blocks["A"], frame, axes=(2, 3, 4))[:, :, 0, 0, 0, :],
        "B": frame_transform(blocks["B"], frame, axes=(2, 3))[:, :, 0, 0, :],
        "P": frame_transform(blocks["P"], frame, axes=(1, 2))[:, 0, 0, :, :],
    }


def _weak_null_at(tensors: CoefficientTensors, omega: np.ndarray) -> Dict[str, float]:
    comps = underline_components(tensors, omega)
    return {name: float(np.max(np.abs(arr), initial=0.0)) for name, arr in comps.items()}


def _weak_null_report(tensors: CoefficientTensors, omegas: np.ndarray, check: str,
                      tol: float) -> NullCheckResult:
    K = tensors.scale
    worst_abs, worst_rel, worst_name = 0.0, 0.0, None
    for omega in omegas:
        xi_norm = np.sqrt(1.0 + float(np.dot(omega, omega)))
        for name, value in _weak_null_at(tensors, omega).items():
            rel = value / (K * xi_norm ** DEGREES[name]) if K > 0 else 0.0
            worst_abs = max(worst_abs, value)
            if rel > worst_rel:
                worst_rel, worst_name = rel, name
    passed = worst_rel <= tol
    log_check_result(check, passed, worst_rel, tol, n_samples=len(omegas))
    return NullCheckResult(
        check=check,
        passed=passed,
        max_violation=worst_abs,
        relative_violation=worst_rel,
        n_samples=len(omegas),
        tolerance=tol,
        worst_tensor=worst_name,
    )


def check_weak_null(tensors: CoefficientTensors, point: Iterable[float],
                    tol: Optional[float] = None) -> NullCheckResult:
    """Weak null condition at one point (t, x) with r > 0"""
    p = np.asarray(point, dtype=float).reshape(4)
    frame = FrameMatrices.at_point(p[1:])
    tol = settings.NULL_TOL if tol is None else tol
    return _weak_null_report(tensors, frame.omega[None, :], "weak_null_point", tol)


def check_weak_null_sampled(tensors: CoefficientTensors, n: int = 100, seed: int = 0,
                            mode: str = "omega", tol: Optional[float] = None) -> NullCheckResult:
    """
    Weak null condition over sampled directions

    mode 'omega' uses the sphere sequence; mode 'exterior' uses omega = x/r
    at random points of Lambda' with r >= t/2.
    """
    tol = settings.NULL_TOL if tol is None else tol
    if mode == "omega":
        omegas = sphere_directions(n)
    elif mode == "exterior":
        pts = sample_points(n, seed, "exterior")
        omegas = pts[:, 1:] / np.linalg.norm(pts[:, 1:], axis=1)[:, None]
    else:
        raise DomainError(f"Unknown weak-null sampling mode: {mode}")
    return _weak_null_report(tensors, omegas, f"weak_null_{mode}", tol)


def null_implies_weak_null(tensors: CoefficientTensors, n: int = 100, tol: Optional[float] = None) -> bool:
    """False only if the null condition passes while the weak null condition fails"""
    null = check_null_condition(tensors, sample_null_cone(n), tol)
    weak = check_weak_null_sampled(tensors, n, mode="omega", tol=tol)
    holds = (not null.passed) or weak.passed
    logger.debug("Null => weak null implication", holds=holds)
    return holds


# Classical catalog

def _single(P_entries: Dict[tuple, float], j0: int = 1) -> CoefficientTensors:
    t = CoefficientTensors.zeros(j0=j0, k0=0)
    P = np.zeros_like(t.P)
    for index, value in P_entries.items():
        P[index] = value
    return t.replace(P=P)


def q0_form() -> CoefficientTensors:
    """(d_t u)^2 - |grad u|^2"""
    return _single({(0, 0, 0, 0, 0): 1.0, (0, 1, 1, 0, 0): -1.0,
                    (0, 2, 2, 0, 0): -1.0, (0, 3, 3, 0, 0): -1.0})


def q_ab_form(a: int, b: int) -> CoefficientTensors:
    """d_a u d_b v - d_b u d_a v with two wave components"""
    return _single({(0, a, b, 0, 1): 1.0, (0, b, a, 0, 1): -1.0}, j0=2)


def dt_squared_form() -> CoefficientTensors:
    """(d_t u)^2"""
    return _single({(0, 0, 0, 0, 0): 1.0})


def dt_product_form() -> CoefficientTensors:
    """(d_t u)(d_t v)"""
    return _single({(0, 0, 0, 0, 1): 1.0}, j0=2)


def null_catalog() -> Dict[str, CoefficientTensors]:
    """Classical forms mapped to whether they satisfy the null condition"""
    return {
        "Q0": q0_form(),
        "Q01": q_ab_form(0, 1),
        "Q12": q_ab_form(1, 2),
        "Q23": q_ab_form(2, 3),
        "dt_u_squared": dt_squared_form(),
        "dt_u_dt_v": dt_product_form(),
    }


CATALOG_EXPECTED = {
    "Q0": True,
    "Q01": True,
    "Q12": True,
    "Q23": True,
    "dt_u_squared": False,
    "dt_u_dt_v": False,
}
