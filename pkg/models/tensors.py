"""
Coefficient tensors of the quadratic wave-Klein-Gordon system and null covectors
"""
from dataclasses import dataclass, field
from typing import Dict, Iterable, Tuple

import numpy as np

from core.errors import ValidationError

NULL_TOL = 1e-14

# tensor name -> number of component indices, number of spacetime indices
TENSOR_SHAPES: Dict[str, Tuple[int, int]] = {
    "A": (3, 3),   # A[i][j][alpha][beta][gamma][k]
    "B": (3, 2),   # B[i][j][alpha][beta][k]
    "P": (3, 2),   # P[i][alpha][beta][j][k]
    "Q": (3, 1),   # Q[i][alpha][j][k]
    "R": (3, 0),   # R[i][j][k]
}


def _shape(name: str, n: int) -> Tuple[int, ...]:
    if name == "A":
        return (n, n, 4, 4, 4, n)
    if name == "B":
        return (n, n, 4, 4, n)
    if name == "P":
        return (n, 4, 4, n, n)
    if name == "Q":
        return (n, 4, n, n)
    return (n, n, n)


@dataclass(frozen=True, eq=False)
class CoefficientTensors:
    """
    Constant coefficients A, B, P, Q, R of a system with j0 wave and k0
    Klein-Gordon components; components are 0-based, waves first.
    """
    j0: int = 1
    k0: int = 1
    A: np.ndarray = None
    B: np.ndarray = None
    P: np.ndarray = None
    Q: np.ndarray = None
    R: np.ndarray = None
    coupled: bool = False
    meta: Dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if self.j0 < 0 or self.k0 < 0 or self.j0 + self.k0 == 0:
            raise ValidationError(f"Invalid component counts j0={self.j0}, k0={self.k0}")
        n = self.n
        for name in TENSOR_SHAPES:
            arr = getattr(self, name)
            if arr is None:
                arr = np.zeros(_shape(name, n))
            arr = np.array(arr, dtype=float)
            if arr.shape != _shape(name, n):
                raise ValidationError(
                    f"Tensor {name} has shape {arr.shape}, expected {_shape(name, n)}",
                    {"tensor": name}
                )
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @classmethod
    def zeros(cls, j0: int = 1, k0: int = 1, coupled: bool = False) -> "CoefficientTensors":
        return cls(j0=j0, k0=k0, coupled=coupled)

    @property
    def n(self) -> int:
        return self.j0 + self.k0

    @property
    def wave(self) -> range:
        """Indices of wave components (the hat block)"""
        return range(self.j0)

    @property
    def klein_gordon(self) -> range:
        return range(self.j0, self.n)

    @property
    def scale(self) -> float:
        """K: largest coefficient magnitude over all tensors"""
        return float(max(np.max(np.abs(getattr(self, name)), initial=0.0) for name in TENSOR_SHAPES))

    def arrays(self) -> Dict[str, np.ndarray]:
        return {name: getattr(self, name) for name in TENSOR_SHAPES}

    def replace(self, **changes) -> "CoefficientTensors":
        data = dict(j0=self.j0, k0=self.k0, coupled=self.coupled, meta=dict(self.meta))
        data.update(self.arrays())
        data.update(changes)
        return CoefficientTensors(**data)

    def equals(self, other: "CoefficientTensors") -> bool:
        return (
            self.j0 == other.j0 and self.k0 == other.k0 and self.coupled == other.coupled
            and all(np.array_equal(getattr(self, k), getattr(other, k)) for k in TENSOR_SHAPES)
        )


@dataclass(frozen=True, eq=False)
class NullVector:
    """Covector xi with xi_0^2 = |xi|^2"""
    xi: np.ndarray

    def __post_init__(self):
        xi = np.asarray(self.xi, dtype=float).reshape(4)
        defect = abs(xi[0] * xi[0] - float(np.dot(xi[1:], xi[1:])))
        if defect > NULL_TOL * max(1.0, xi[0] * xi[0]):
            raise ValidationError(f"Covector {xi.tolist()} is not null", {"defect": defect})
        xi.setflags(write=False)
        object.__setattr__(self, "xi", xi)

    @classmethod
    def from_direction(cls, omega: Iterable[float], sign: float = 1.0, scale: float = 1.0) -> "NullVector":
        w = np.asarray(omega, dtype=float)
        w = w / np.linalg.norm(w)
        return cls(scale * np.concatenate([[sign], w]))

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.xi))

    def scaled(self, lam: float) -> "NullVector":
        return NullVector(lam * self.xi)
