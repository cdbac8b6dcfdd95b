"""
Run configuration schemas
"""
from typing import Dict, List, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from core.config import PRESETS, QUADRATURE_RULES, MASS_NORMALIZATIONS, MAX_CFL, MAX_SNAPSHOT_INTERVAL


def parse_ladder(value: Union[str, List[float], None]) -> Optional[List[float]]:
    """Accept a list of radii or a 'start:stop:step' range (stop included)"""
    if value is None or isinstance(value, list):
        return value
    parts = str(value).split(":")
    if len(parts) != 3:
        raise ValueError("T_ladder must be a list or 'start:stop:step'")
    start, stop, step = (float(p) for p in parts)
    if step <= 0 or stop < start:
        raise ValueError("T_ladder range needs step > 0 and stop >= start")
    count = int(np.floor((stop - start) / step + 1e-9)) + 1
    return [round(start + k * step, 12) for k in range(count)]


class RunConfig(BaseModel):
    """Simulation configuration (TOML file plus --set overrides)"""
    model_config = ConfigDict(extra="forbid")

    B: float = Field(default=2.0, gt=0, description="Support radius of the Cauchy data")
    epsilon: float = Field(default=0.01, ge=0, description="Data amplitude")
    dr: float = Field(default=0.02, gt=0, description="Radial grid spacing")
    cfl: float = Field(default=0.5, gt=0, le=MAX_CFL, description="dt / dr")
    t_final: Optional[float] = Field(default=None, gt=0, description="End time; preset default when unset")
    preset: str = Field(default="free_wave")
    tensors_file: Optional[str] = Field(default=None, description="Coefficient tensor file overriding the preset")
    T_ladder: Optional[List[float]] = Field(default=None, description="Hyperboloid radii for reports")
    seed: int = Field(default=0, ge=0)
    snapshot_interval: float = Field(default=MAX_SNAPSHOT_INTERVAL, gt=0, le=MAX_SNAPSHOT_INTERVAL)
    n_nodes: Optional[int] = Field(default=None, ge=8)
    quadrature: Optional[str] = Field(default=None)
    mass_normalization: Optional[str] = Field(default=None)
    quasilinear: bool = Field(default=False)
    toy_G: float = Field(default=0.0, ge=0, le=0.5, description="Bound on the toy metric perturbation g_ij")

    @field_validator("T_ladder", mode="before")
    @classmethod
    def _ladder(cls, v):
        return parse_ladder(v)

    @field_validator("preset")
    @classmethod
    def _preset(cls, v: str) -> str:
        if v not in PRESETS:
            raise ValueError(f"Unknown preset '{v}', expected one of {PRESETS}")
        return v

    @field_validator("quadrature")
    @classmethod
    def _quadrature(cls, v):
        if v is not None and v not in QUADRATURE_RULES:
            raise ValueError(f"Unknown quadrature rule '{v}'")
        return v

    @field_validator("mass_normalization")
    @classmethod
    def _normalization(cls, v):
        if v is not None and v not in MASS_NORMALIZATIONS:
            raise ValueError(f"Unknown mass normalization '{v}'")
        return v


class CliConfig(BaseModel):
    """Resolved command-line invocation"""
    model_config = ConfigDict(extra="forbid")

    subcommand: str
    config_path: Optional[str] = None
    overrides: Dict[str, str] = Field(default_factory=dict)
    out_dir: str
    seed: int = Field(default=0, ge=0)
    dry_run: bool = False
