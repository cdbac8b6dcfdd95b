"""
Evolution state models: system description, radial grid, Cauchy state, run record and slice jets
"""
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from core.config import MAX_CFL
from core.errors import ConfigurationError, ValidationError
from models.geometry import HyperboloidSlice
from models.tensors import CoefficientTensors


@dataclass(frozen=True, eq=False)
class SystemSpec:
    """Box w_i + G_i^{jab} d_ab w_j + D_i^2 w_i = F_i with constant coefficient tensors"""
    tensors: CoefficientTensors
    masses: Tuple[float, ...]
    quasilinear: bool = False
    toy_G: float = 0.0
    name: str = "custom"

    def __post_init__(self):
        masses = tuple(float(m) for m in self.masses)
        if len(masses) != self.tensors.n:
            raise ValidationError(
                f"Expected {self.tensors.n} masses, got {len(masses)}",
                {"masses": masses}
            )
        for i, m in enumerate(masses):
            if i < self.tensors.j0 and m != 0.0:
                raise ValidationError(f"Wave component {i + 1} must be massless", {"mass": m})
            if i >= self.tensors.j0 and m < 1.0:
                raise ValidationError(f"Klein-Gordon component {i + 1} needs D >= 1", {"mass": m})
        object.__setattr__(self, "masses", masses)

    @property
    def n(self) -> int:
        return self.tensors.n

    @property
    def j0(self) -> int:
        return self.tensors.j0


@dataclass(frozen=True)
class RadialGrid:
    """Uniform radial grid r_k = k dr with two ghost cells at each end"""
    r_max: float
    dr: float
    cfl: float = 0.5
    n_ghost: int = 2

    def __post_init__(self):
        if self.dr <= 0 or self.r_max <= self.dr:
            raise ConfigurationError("Radial grid needs 0 < dr < r_max", {"dr": self.dr, "r_max": self.r_max})
        if not 0 < self.cfl <= MAX_CFL:
            raise ConfigurationError(
                f"CFL number {self.cfl} outside (0, {MAX_CFL}]",
                {"cfl": self.cfl}
            )

    @property
    def n_points(self) -> int:
        return int(round(self.r_max / self.dr)) + 1

    @property
    def r(self) -> np.ndarray:
        return self.dr * np.arange(self.n_points)

    @property
    def dt(self) -> float:
        return self.cfl * self.dr


@dataclass(frozen=True, eq=False)
class CauchyState:
    """Values u_i(r) and d_t u_i(r) of every component at time t"""
    t: float
    u: np.ndarray    # (n_components, n_points)
    u_t: np.ndarray
    support_radius: float = 0.0

    @property
    def n_components(self) -> int:
        return int(self.u.shape[0])

    def as_array(self) -> np.ndarray:
        return np.stack([self.u, self.u_t])


@dataclass(frozen=True, eq=False)
class Snapshot:
    t: float
    u: np.ndarray
    u_t: np.ndarray
    u_tt: np.ndarray


@dataclass(eq=False)
class RunRecord:
    """Snapshots of one evolution plus its provenance"""
    spec: SystemSpec
    grid: RadialGrid
    t_start: float
    t_final: float
    snapshots: List[Snapshot] = field(default_factory=list)
    config_hash: str = ""
    seed: int = 0
    run_id: str = ""
    truncated: bool = False
    truncation_time: Optional[float] = None
    support_history: List[Tuple[float, float]] = field(default_factory=list)
    support_ok: bool = True
    meta: Dict[str, Any] = field(default_factory=dict)

    @property
    def t_end(self) -> float:
        """Last time with a stored snapshot"""
        return self.snapshots[-1].t if self.snapshots else self.t_start

    @property
    def times(self) -> np.ndarray:
        return np.array([s.t for s in self.snapshots])

    def state_at(self, index: int) -> CauchyState:
        snap = self.snapshots[index]
        return CauchyState(t=snap.t, u=snap.u, u_t=snap.u_t)


@dataclass(frozen=True, eq=False)
class FieldJetOnSlice:
    """
    First jet (u, d_t u, d_i u) of one component at the nodes of a slice

    Radial jets place node i at x = (r_i, 0, 0), so d_x u = (d_r u, 0, 0).
    """
    slice: HyperboloidSlice
    u: np.ndarray
    u_t: np.ndarray
    u_x: np.ndarray          # (n, 3)
    mass: float = 0.0

    def __post_init__(self):
        n = self.slice.n_nodes
        if self.u.shape != (n,) or self.u_t.shape != (n,) or self.u_x.shape != (n, 3):
            raise ValidationError(
                "Jet arrays do not match the slice nodes",
                {"n_nodes": n, "u": self.u.shape, "u_x": self.u_x.shape}
            )
        if self.mass < 0:
            raise ValidationError("Mass must be nonnegative", {"mass": self.mass})

    @classmethod
    def radial(cls, slice_: HyperboloidSlice, u: np.ndarray, u_t: np.ndarray,
               u_r: np.ndarray, mass: float = 0.0) -> "FieldJetOnSlice":
        u_x = np.zeros((slice_.n_nodes, 3))
        u_x[:, 0] = u_r
        return cls(slice_, np.asarray(u, dtype=float), np.asarray(u_t, dtype=float), u_x, mass)

    @classmethod
    def zero(cls, slice_: HyperboloidSlice, mass: float = 0.0) -> "FieldJetOnSlice":
        n = slice_.n_nodes
        return cls(slice_, np.zeros(n), np.zeros(n), np.zeros((n, 3)), mass)

    @property
    def t(self) -> np.ndarray:
        return self.slice.times

    @property
    def x(self) -> np.ndarray:
        return self.slice.positions

    @property
    def gradient(self) -> np.ndarray:
        """(n, 4) array of d_alpha u"""
        return np.column_stack([self.u_t, self.u_x])

    @property
    def bar(self) -> np.ndarray:
        """d-bar_i u = d_i u + (x^i/t) d_t u"""
        return self.u_x + (self.x / self.t[:, None]) * self.u_t[:, None]

    @property
    def good(self) -> np.ndarray:
        """d-tilde_i u = omega^i d_t u + d_i u; nan at r = 0"""
        r = self.slice.radii
        with np.errstate(invalid="ignore", divide="ignore"):
            omega = self.x / r[:, None]
        return omega * self.u_t[:, None] + self.u_x
