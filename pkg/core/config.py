"""
Hyperfoil - Core Configuration

numpy + scipy + sympy + pydantic-settings
"""
from typing import Optional
from pydantic_settings import BaseSettings, SettingsConfigDict
from pydantic import Field


class Settings(BaseSettings):
    model_config = SettingsConfigDict(
        env_prefix="HYPERFOIL_",
        env_file=".env",
        case_sensitive=True,
        extra="ignore",
    )

    # Application
    APP_NAME: str = "hyperfoil"
    APP_VERSION: str = "1.0.0"
    DEBUG: bool = Field(default=False)
    LOG_LEVEL: Optional[str] = Field(default=None)

    # Output
    OUT: str = Field(default="out")

    # Workers
    MAX_WORKERS: int = Field(default=4, ge=1, le=64)

    # Slice quadrature
    QUADRATURE: str = Field(default="midpoint")
    SLICE_NODES: int = Field(default=512, ge=8)

    # Energy
    MASS_NORMALIZATION: str = Field(default="double")

    # Tolerances
    NULL_TOL: float = Field(default=1e-12, gt=0)
    IDENTITY_TOL: float = Field(default=1e-10, gt=0)


# Global settings instance
settings = Settings()


# Evolution presets
PRESETS = ["free_wave", "free_kg", "null_wave", "nonnull_wave", "coupled_wkg"]

# Quadrature rules accepted by build_slice
QUADRATURE_RULES = {
    "midpoint": "composite midpoint, order 2",
    "gauss": "Gauss-Legendre on the radial extent",
}

MASS_NORMALIZATIONS = {
    "double": 2.0,   # 2(au)^2
    "half": None,    # (a/2)u^2, linear in a
    "flux": 1.0,     # (au)^2
}

# Solver limits
MAX_CFL = 0.5
MAX_SNAPSHOT_INTERVAL = 0.25
BLOWUP_THRESHOLD = 1e6
SUPPORT_THRESHOLD = 1e-10
INTERPOLATION_BUDGET = 0.01

# Default T-ladders per preset (hyperboloid radii). The decay ladders start once
# the transient of data posed at t = B + 1 has left the measured region.
DEFAULT_LADDERS = {
    "free_wave": [7.0, 7.5, 8.0, 8.5, 9.0, 9.5, 10.0, 10.5, 11.0, 11.5, 12.0],
    "free_kg": [40.0, 45.0, 50.0, 55.0, 60.0, 65.0, 70.0, 75.0, 80.0],
    "null_wave": [3.5, 4.0, 4.5, 5.0, 5.5, 6.0],
    "nonnull_wave": [3.5, 4.0, 4.5, 5.0, 5.5, 6.0],
    "coupled_wkg": [3.0, 3.5, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0, 11.0, 12.0],
}
