"""
Field models: analytic test functions, vector-field operators and the null frame
"""
from dataclasses import dataclass, field
from enum import Enum as PyEnum
from functools import cached_property
from typing import Any, Callable, Dict, Iterable, Tuple

import numpy as np
import sympy as sp

from core.errors import DomainError, ValidationError

# Coordinates of Minkowski space
t_sym, x1_sym, x2_sym, x3_sym = sp.symbols("t x1 x2 x3", real=True)
COORDS = (t_sym, x1_sym, x2_sym, x3_sym)
SPATIAL = (x1_sym, x2_sym, x3_sym)
r_sym = sp.sqrt(x1_sym ** 2 + x2_sym ** 2 + x3_sym ** 2)
T_sym = sp.sqrt(t_sym ** 2 - r_sym ** 2)


class FieldOperator(PyEnum):
    """First-order operators of the hyperboloidal vector-field algebra"""
    D0 = "D0"          # partial_t
    D1 = "D1"
    D2 = "D2"
    D3 = "D3"
    H1 = "H1"          # boosts t d_i + x^i d_t
    H2 = "H2"
    H3 = "H3"
    Db1 = "Db1"        # H_i / t
    Db2 = "Db2"
    Db3 = "Db3"
    Nd1 = "Nd1"        # omega^i d_t + d_i
    Nd2 = "Nd2"
    Nd3 = "Nd3"
    GoodT = "GoodT"    # (t - r)/r d_t
    GoodX1 = "GoodX1"  # (t - r)/r d_i
    GoodX2 = "GoodX2"
    GoodX3 = "GoodX3"

    @property
    def index(self) -> int:
        """Spatial index 1..3, or 0 for time-like members"""
        tail = self.value[-1]
        return int(tail) if tail.isdigit() else 0

    @property
    def needs_r(self) -> bool:
        return self.value.startswith(("Nd", "Good"))

    @property
    def needs_t(self) -> bool:
        return self.value.startswith("Db")


PARTIALS = (FieldOperator.D0, FieldOperator.D1, FieldOperator.D2, FieldOperator.D3)
BOOSTS = (FieldOperator.H1, FieldOperator.H2, FieldOperator.H3)
TANGENTIALS = (FieldOperator.Db1, FieldOperator.Db2, FieldOperator.Db3)
GOOD = (FieldOperator.Nd1, FieldOperator.Nd2, FieldOperator.Nd3)
# D_g: good derivatives and the (t - r)/r weighted partials
GOOD_FAMILY = GOOD + (FieldOperator.GoodT, FieldOperator.GoodX1,
                      FieldOperator.GoodX2, FieldOperator.GoodX3)
# Z = {partial_alpha, H_i}
Z_FAMILY = PARTIALS + BOOSTS


@dataclass(frozen=True)
class MultiIndex:
    """Ordered sequence of operators, applied left to right"""
    ops: Tuple[FieldOperator, ...] = ()

    def __len__(self) -> int:
        return len(self.ops)

    def __add__(self, other: "MultiIndex") -> "MultiIndex":
        return MultiIndex(self.ops + other.ops)

    @classmethod
    def of(cls, *names: Any) -> "MultiIndex":
        return cls(tuple(FieldOperator(n) if isinstance(n, str) else n for n in names))

    def __str__(self) -> str:
        return "".join(op.value for op in self.ops) or "()"


@dataclass(frozen=True, eq=False)
class ScalarField:
    """
    Closed-form test function of (t, x1, x2, x3) with exact derivatives

    order is the remaining derivative budget. needs_r / needs_t record whether
    the expression was built with omega-dependent or 1/t operators, so
    evaluation at r = 0 or t <= 0 fails fast.
    """
    expr: sp.Expr
    order: int = 6
    name: str = "f"
    needs_r: bool = False
    needs_t: bool = False
    support: Dict[str, Any] = field(default_factory=dict)

    @cached_property
    def _fn(self) -> Callable:
        return sp.lambdify(COORDS, self.expr, "numpy", cse=True)

    def check_domain(self, points: np.ndarray) -> None:
        check_points_domain(points, self.needs_r, self.needs_t)

    def __call__(self, points: Iterable) -> np.ndarray:
        """Evaluate at an (n, 4) array of points (t, x1, x2, x3)"""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        self.check_domain(pts)
        with np.errstate(all="ignore"):
            values = self._fn(pts[:, 0], pts[:, 1], pts[:, 2], pts[:, 3])
        return np.broadcast_to(np.asarray(values, dtype=float), (pts.shape[0],)).copy()

    def scaled(self, factor: float) -> "ScalarField":
        return ScalarField(factor * self.expr, self.order, f"{factor}*{self.name}",
                           self.needs_r, self.needs_t, dict(self.support))


def check_points_domain(points: np.ndarray, needs_r: bool, needs_t: bool) -> None:
    """Raise DomainError when points fall outside the operators' domain"""
    if needs_t and np.any(points[:, 0] <= 0.0):
        raise DomainError("Operator 1/t H_i requires t > 0")
    if needs_r:
        r = np.sqrt(np.sum(points[:, 1:] ** 2, axis=1))
        if np.any(r == 0.0):
            raise DomainError("omega-dependent operator evaluated at r = 0")


@dataclass(frozen=True, eq=False)
class FrameMatrices:
    """
    Transition between the natural frame and the null frame at direction omega

    phi rows: (1, 0, 0, 0), (omega^i, e_i); psi rows: (1, 0, 0, 0), (-omega^i, e_i).
    """
    omega: np.ndarray
    phi: np.ndarray
    psi: np.ndarray

    @classmethod
    def at(cls, omega: Iterable[float]) -> "FrameMatrices":
        w = np.asarray(omega, dtype=float).reshape(3)
        if not np.all(np.isfinite(w)):
            raise ValidationError("Frame direction must be finite")
        phi = np.eye(4)
        psi = np.eye(4)
        phi[1:, 0] = w
        psi[1:, 0] = -w
        return cls(omega=w, phi=phi, psi=psi)

    @classmethod
    def at_point(cls, x: Iterable[float]) -> "FrameMatrices":
        x = np.asarray(x, dtype=float).reshape(3)
        r = float(np.linalg.norm(x))
        if r == 0.0:
            raise DomainError("Null frame is undefined at r = 0")
        return cls.at(x / r)
