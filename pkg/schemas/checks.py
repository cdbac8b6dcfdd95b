"""
Report schemas for verification batteries and evolution diagnostics
"""
from typing import List, Optional

from pydantic import BaseModel, Field


class BoundsReport(BaseModel):
    """t-range check on one hyperboloid"""
    T: float
    region: str
    n_samples: int
    t_min: Optional[float] = None
    t_max: Optional[float] = None
    upper_bound: Optional[float] = None
    worst_violation: float = Field(ge=0.0)
    passed: bool


class IdentityResult(BaseModel):
    """Residual of one commutator identity on one test field"""
    identity_id: str
    field: str
    region: str
    n_points: int
    max_residual: float
    scale: float = Field(description="Largest |side| over the sample, floors the tolerance at 1")
    tolerance: float
    passed: bool
    informational: bool = False


class BoundReport(BaseModel):
    """Measured constant of a commutator-bound lemma"""
    lemma_id: str
    field: str
    order: int = Field(ge=0, le=3)
    n_points: int
    constant: float
    constant_refined: float = Field(description="Same constant on twice the samples")
    finite: bool
    stable: bool
    passed: bool


class NullCheckResult(BaseModel):
    """Null or weak-null verdict for a coefficient set"""
    check: str
    passed: bool
    max_violation: float
    relative_violation: float
    n_samples: int
    tolerance: float
    worst_tensor: Optional[str] = None


class EnergyReport(BaseModel):
    """Hyperboloidal energy through its three equivalent expressions"""
    T: float
    component: int = 0
    E_expr1: float
    E_expr2: float
    E_expr3: float
    mass_term: float
    E_G: Optional[float] = None
    spread: float
    pointwise_spread: float
    normalization: str

    @property
    def E_m(self) -> float:
        return self.E_expr1


class TangentialReport(BaseModel):
    T: float
    tangential: float
    energy: float
    ratio: float
    bound_factor: float
    passed: bool


class CurvedEnergyReport(BaseModel):
    """E_m and E_G of every component on one slice"""
    T: float
    E_m: List[float]
    E_G: List[float]
    total_m: float
    total_G: float
    max_G: float
    comparable: bool = Field(description="sum E_m <= 3 sum E_G")


class EnergyBatteryReport(BaseModel):
    n_states: int
    max_pointwise_spread: float
    max_integrated_spread: float
    passed: bool


class InequalityRow(BaseModel):
    """Square-root energy inequality on one slice"""
    T: float
    component: int = 0
    lhs: float
    rhs: float
    source_integral: float
    margin: float = Field(description="(rhs - lhs) / rhs, negative when violated")
    passed: bool


class DecayDiagnostic(BaseModel):
    """Weighted sup values on one slice"""
    T: float
    component: int = 0
    sup_bar: Optional[float] = Field(default=None, description="sup over Lambda' of t^{3/2}|d-bar u|")
    sup_weighted: Optional[float] = Field(default=None, description="sup over Lambda' of t^{3/2}|(T/t) d u|")
    sup_mass: Optional[float] = Field(default=None, description="sup over Lambda' of t^{3/2}|a u|")
    sup_good: Optional[float] = Field(default=None, description="sup over r >= t/2 of t^{3/2}|d-tilde u|")
    sup_interior: Optional[float] = Field(default=None, description="sup over r <= t/2 of |u|")
    sup_envelope: Optional[float] = Field(default=None, description="sup over r <= t/2 of sqrt(u^2 + (N u/a)^2), N the unit normal of H_T")


class DecayFit(BaseModel):
    """Least-squares slope of log(sup) against log(T)"""
    metric: str
    region: str
    component: int = 0
    exponent: float
    stderr: float
    intercept: float
    n_points: int


class BootstrapRow(BaseModel):
    s: float
    component: int
    kind: str
    energy_sqrt: float
    bound: float
    passed: bool


class SobolevRow(BaseModel):
    profile: str
    T: float
    sup_term: float
    norm_term: float
    ratio: float


class SliceRow(BaseModel):
    """One line of slices.csv"""
    T: float
    component: int
    E1: float
    E2: float
    E3: float
    spread: float
    EG: Optional[float] = None
    mass_term: float
    margin: Optional[float] = None


class RunRow(BaseModel):
    """One line of run.csv"""
    t: float
    component: int
    l2: float
    sup: float


class ContrastReport(BaseModel):
    """Null versus non-null run at the same amplitude"""
    epsilon: float
    T: Optional[float] = None
    null_energy: Optional[float] = None
    nonnull_energy: Optional[float] = None
    ratio: Optional[float] = None
    nonnull_truncated: bool
    truncation_time: Optional[float] = None
    outcome: str = Field(description="'truncated', 'energy_ratio' or 'none'")
    passed: bool


class LifespanRow(BaseModel):
    epsilon: float
    truncated: bool
    lifespan: float = Field(description="Truncation time, or the reached end time")


class RefinementRow(BaseModel):
    """Manufactured inequality margin on one slice at dr and dr/2"""
    T: float
    mass: float = 0.0
    dr: float
    margin_coarse: float
    margin_fine: float
    passed: bool = Field(description="The margin does not get worse at dr/2")
