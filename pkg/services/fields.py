"""
Vector-field algebra on analytic test functions and null-frame transforms
"""
from typing import Dict, Iterable, List, Optional, Sequence

import numpy as np
import sympy as sp

from core.errors import DerivativeOrderError, DomainError, ValidationError
from core.logging import logger
from models.field import (
    COORDS, SPATIAL, FieldOperator, FrameMatrices, MultiIndex, ScalarField,
    check_points_domain, r_sym, t_sym, x1_sym, x2_sym, x3_sym,
)


def operator_expr(op: FieldOperator, expr: sp.Expr) -> sp.Expr:
    """Symbolic action of a first-order operator on an expression"""
    i = op.index
    name = op.value
    if name.startswith("D") and not name.startswith("Db"):
        return sp.diff(expr, COORDS[i])
    dt = sp.diff(expr, t_sym)
    if name.startswith("H"):
        xi = SPATIAL[i - 1]
        return t_sym * sp.diff(expr, xi) + xi * dt
    if name.startswith("Db"):
        xi = SPATIAL[i - 1]
        return sp.diff(expr, xi) + xi / t_sym * dt
    if name.startswith("Nd"):
        xi = SPATIAL[i - 1]
        return xi / r_sym * dt + sp.diff(expr, xi)
    weight = (t_sym - r_sym) / r_sym
    if op == FieldOperator.GoodT:
        return weight * dt
    return weight * sp.diff(expr, SPATIAL[i - 1])


def apply(op: FieldOperator, f: ScalarField) -> ScalarField:
    """Exact composite field op(f); spends one derivative order"""
    if f.order < 1:
        raise DerivativeOrderError(
            f"Field {f.name} has no derivative order left for {op.value}",
            {"field": f.name, "operator": op.value}
        )
    return ScalarField(
        expr=operator_expr(op, f.expr),
        order=f.order - 1,
        name=f"{op.value}({f.name})",
        needs_r=f.needs_r or op.needs_r,
        needs_t=f.needs_t or op.needs_t,
        support=dict(f.support),
    )


def apply_multi(J: MultiIndex, f: ScalarField) -> ScalarField:
    """Apply J = (Z_1, ..., Z_k) left to right: Z_1 Z_2 ... Z_k f"""
    if len(J) > f.order:
        raise DerivativeOrderError(
            f"|J| = {len(J)} exceeds the derivative budget {f.order} of {f.name}",
            {"multi_index": str(J), "order": f.order}
        )
    result = f
    for op in reversed(J.ops):
        result = apply(op, result)
    return result


def box(f: ScalarField) -> ScalarField:
    """Wave operator d_t^2 - Laplacian"""
    if f.order < 2:
        raise DerivativeOrderError(f"Box needs two derivative orders, {f.name} has {f.order}")
    e = f.expr
    expr = sp.diff(e, t_sym, 2) - sum(sp.diff(e, x, 2) for x in SPATIAL)
    return ScalarField(expr, f.order - 2, f"Box({f.name})", f.needs_r, f.needs_t, dict(f.support))


def evaluate_many(exprs: Sequence[sp.Expr], points: np.ndarray,
                  needs_r: bool = False, needs_t: bool = False) -> np.ndarray:
    """Evaluate several expressions with one lambdified tuple; returns (len(exprs), n)"""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    check_points_domain(pts, needs_r, needs_t)
    fn = sp.lambdify(COORDS, list(exprs), "numpy", cse=True)
    with np.errstate(all="ignore"):
        values = fn(pts[:, 0], pts[:, 1], pts[:, 2], pts[:, 3])
    n = pts.shape[0]
    return np.array([np.broadcast_to(np.asarray(v, dtype=float), (n,)) for v in values])


# Test-function family

def gaussian_field(amplitude: float = 1.0, a: float = 0.01, b: float = 0.01,
                   t0: float = 6.0, x0: Sequence[float] = (1.0, 0.0, 0.0),
                   order: int = 6, name: Optional[str] = None) -> ScalarField:
    """A exp(-a (t - t0)^2 - b |x - x0|^2)"""
    dist = sum((x - c) ** 2 for x, c in zip(SPATIAL, x0))
    expr = amplitude * sp.exp(-a * (t_sym - t0) ** 2 - b * dist)
    return ScalarField(expr, order, name or f"gauss(a={a},b={b})",
                       support={"kind": "gaussian", "a": a, "b": b, "t0": t0, "x0": list(x0)})


def polynomial_gaussian_field(order: int = 6) -> ScalarField:
    """Polynomial in (t, x) times a Gaussian bump"""
    poly = 1 + sp.Rational(3, 10) * t_sym * x1_sym - sp.Rational(1, 5) * x2_sym * x3_sym \
        + sp.Rational(1, 10) * t_sym ** 2
    bump = sp.exp(-sp.Rational(1, 20) * (t_sym - 6) ** 2
                  - sp.Rational(1, 10) * (x1_sym ** 2 + x2_sym ** 2 + x3_sym ** 2))
    return ScalarField(poly * bump, order, "poly*gauss", support={"kind": "polynomial-gaussian"})


def cone_field(order: int = 6) -> ScalarField:
    """Cone-adapted profile exp(-(t - r - 2)^2) (1 + x1/t)"""
    expr = sp.exp(-(t_sym - r_sym - 2) ** 2) * (1 + x1_sym / t_sym)
    return ScalarField(expr, order, "cone", needs_r=True, needs_t=True,
                       support={"kind": "cone", "t_minus_r": 2.0})


def boost_profile_field(profile: sp.Expr, name: str, order: int = 4) -> ScalarField:
    """g(x/t) for an expression g in the variables y1, y2, y3 (given as x1, x2, x3)"""
    expr = profile.subs({x1_sym: x1_sym / t_sym, x2_sym: x2_sym / t_sym, x3_sym: x3_sym / t_sym},
                        simultaneous=True)
    return ScalarField(expr, order, name, needs_t=True, support={"kind": "boost-invariant"})


def test_family(order: int = 6) -> List[ScalarField]:
    """Five fields covering the identity battery"""
    return [
        gaussian_field(order=order, name="gauss-wide"),
        gaussian_field(1.0, 0.1, 0.2, 5.0, (0.5, -0.3, 0.2), order, "gauss"),
        gaussian_field(2.0, 0.05, 0.05, 7.0, (0.0, 2.0, -1.0), order, "gauss-offaxis"),
        polynomial_gaussian_field(order),
        cone_field(order),
    ]


def sample_points(n: int, seed: int = 0, region: str = "lambda",
                  T_range: Sequence[float] = (2.0, 10.0), min_fraction: float = 0.05) -> np.ndarray:
    """
    Random points of Lambda' inside the slab G_{T1}^{T2}, shape (n, 4)

    region 'lambda' keeps r >= min_fraction of the slice extent (so r > 0);
    region 'exterior' samples r >= t/2.
    """
    rng = np.random.default_rng(seed)
    T = rng.uniform(T_range[0], T_range[1], n)
    lam = (T * T - 1.0) / 2.0
    if region == "exterior":
        lo = T / np.sqrt(3.0)
    elif region == "lambda":
        lo = min_fraction * lam
    else:
        raise ValidationError(f"Unknown sampling region: {region}")
    r = rng.uniform(lo, lam)
    direction = rng.normal(size=(n, 3))
    direction /= np.linalg.norm(direction, axis=1)[:, None]
    t = np.sqrt(T * T + r * r)
    return np.column_stack([t, r[:, None] * direction])


# Null frame

def frame_matrices(x_or_omega: Iterable[float], is_direction: bool = False) -> FrameMatrices:
    if is_direction:
        return FrameMatrices.at(x_or_omega)
    return FrameMatrices.at_point(x_or_omega)


def frame_transform_two_tensor(T_coeffs: np.ndarray, x: Iterable[float]) -> np.ndarray:
    """Underlined components Psi^T T Psi at the spatial point x (r > 0)"""
    frame = FrameMatrices.at_point(x)
    T_coeffs = np.asarray(T_coeffs, dtype=float)
    if T_coeffs.shape != (4, 4):
        raise ValidationError("Two-tensor must be 4x4", {"shape": T_coeffs.shape})
    return frame.psi.T @ T_coeffs @ frame.psi


def inverse_frame_transform_two_tensor(U_coeffs: np.ndarray, x: Iterable[float]) -> np.ndarray:
    """Natural-frame components Phi^T U Phi"""
    frame = FrameMatrices.at_point(x)
    return frame.phi.T @ np.asarray(U_coeffs, dtype=float) @ frame.phi


def frame_transform(tensor: np.ndarray, frame: FrameMatrices, axes: Sequence[int],
                    inverse: bool = False) -> np.ndarray:
    """Transform the listed spacetime axes of a tensor of any rank"""
    M = frame.phi if inverse else frame.psi
    out = np.asarray(tensor, dtype=float)
    for ax in axes:
        out = np.moveaxis(np.tensordot(out, M, axes=([ax], [0])), -1, ax)
    return out


def check_frame_identity(n: int = 100, seed: int = 0) -> float:
    """Max entry error of Phi Psi - I over random unit directions"""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for w in rng.normal(size=(n, 3)):
        frame = FrameMatrices.at(w / np.linalg.norm(w))
        worst = max(worst, float(np.max(np.abs(frame.phi @ frame.psi - np.eye(4)))))
    logger.debug("Frame identity checked", n=n, worst=worst)
    return worst
