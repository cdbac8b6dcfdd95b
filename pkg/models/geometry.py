"""
Geometry models for the hyperboloidal foliation of the forward light cone
"""
from dataclasses import dataclass, field
from enum import Enum as PyEnum
from typing import Optional, Tuple

import numpy as np

from core.errors import DomainError, ValidationError


class RegionKind(PyEnum):
    """Regions of spacetime used by slices and checks"""
    LAMBDA = "lambda"            # {r <= t - 1}
    SLAB = "slab"                # G_{T1}^{T2}: Lambda' with T1 <= T <= T2
    INTERIOR = "interior"        # {r <= t/2}
    EXTERIOR = "exterior"        # {r >= t/2} inside Lambda'


@dataclass(frozen=True)
class Region:
    """A region of the forward light cone"""
    kind: RegionKind = RegionKind.LAMBDA
    T1: Optional[float] = None
    T2: Optional[float] = None

    def __post_init__(self):
        if self.kind == RegionKind.SLAB:
            if self.T1 is None or self.T2 is None:
                raise ValidationError("Slab region needs T1 and T2")
            if self.T1 > self.T2:
                raise ValidationError(
                    f"Slab region requires T1 <= T2, got {self.T1} > {self.T2}",
                    {"T1": self.T1, "T2": self.T2}
                )

    @classmethod
    def lambda_prime(cls) -> "Region":
        return cls(RegionKind.LAMBDA)

    @classmethod
    def slab(cls, T1: float, T2: float) -> "Region":
        return cls(RegionKind.SLAB, T1, T2)

    @classmethod
    def interior(cls) -> "Region":
        return cls(RegionKind.INTERIOR)

    @classmethod
    def exterior(cls) -> "Region":
        return cls(RegionKind.EXTERIOR)

    def radial_extent(self, T: float) -> Tuple[float, float]:
        """
        Radial interval of H_T inside the region

        Lambda' on H_T is r <= (T^2 - 1)/2, the interior cone is r <= T/sqrt(3).
        The exterior cone is taken inside Lambda'.
        """
        lam = (T * T - 1.0) / 2.0
        cone = T / np.sqrt(3.0)
        if self.kind == RegionKind.LAMBDA:
            return 0.0, lam
        if self.kind == RegionKind.SLAB:
            if T < self.T1 or T > self.T2:
                return 0.0, -1.0
            return 0.0, lam
        if self.kind == RegionKind.INTERIOR:
            return 0.0, cone
        return cone, lam


@dataclass(frozen=True)
class SpacetimePoint:
    """Point (t, x) of Minkowski space; radial mode stores x = (r, 0, 0)"""
    t: float
    x: Tuple[float, float, float] = (0.0, 0.0, 0.0)

    @classmethod
    def radial(cls, t: float, r: float) -> "SpacetimePoint":
        if r < 0:
            raise DomainError(f"Radius must be nonnegative, got {r}", {"r": r})
        return cls(t, (float(r), 0.0, 0.0))

    @property
    def r(self) -> float:
        return float(np.sqrt(sum(c * c for c in self.x)))

    @property
    def omega(self) -> np.ndarray:
        """Angular direction x/r; undefined on the axis"""
        r = self.r
        if r == 0.0:
            raise DomainError("omega = x/r is undefined at r = 0", {"t": self.t})
        return np.asarray(self.x, dtype=float) / r


@dataclass(frozen=True, eq=False)
class HyperboloidSlice:
    """
    Radial quadrature on H_T restricted to a region

    Weights include the 4*pi*r^2 factor, so sum(w * g(r)) approximates the
    coordinate-measure integral of a radial function over the slice.
    """
    T: float
    region: Region
    radii: np.ndarray
    weights: np.ndarray
    rule: str = "midpoint"
    r_max: float = 0.0
    times: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        self.radii.setflags(write=False)
        self.weights.setflags(write=False)
        t = np.sqrt(self.T * self.T + self.radii * self.radii)
        t.setflags(write=False)
        object.__setattr__(self, "times", t)

    @property
    def n_nodes(self) -> int:
        return int(self.radii.size)

    @property
    def positions(self) -> np.ndarray:
        """Node positions placed on the first axis, shape (n, 3)"""
        pos = np.zeros((self.n_nodes, 3))
        pos[:, 0] = self.radii
        return pos

    @property
    def t_extent(self) -> Tuple[float, float]:
        """Smallest and largest t reached by the slice region"""
        lo, hi = self.region.radial_extent(self.T)
        return float(np.hypot(self.T, lo)), float(np.hypot(self.T, hi))

    def integrate(self, values: np.ndarray) -> float:
        return float(np.dot(self.weights, values))


@dataclass(frozen=True, eq=False)
class SliceGrid3D:
    """Tensor-product quadrature on H_T in full 3-D, used by the Sobolev check"""
    T: float
    points: np.ndarray   # (n, 4) rows (t, x1, x2, x3)
    weights: np.ndarray  # coordinate measure dx

    @property
    def n_nodes(self) -> int:
        return int(self.weights.size)
