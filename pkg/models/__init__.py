"""
Domain models package
"""
from models.geometry import Region, RegionKind, SpacetimePoint, HyperboloidSlice, SliceGrid3D
from models.field import ScalarField, FieldOperator, MultiIndex, FrameMatrices
from models.tensors import CoefficientTensors, NullVector
from models.state import SystemSpec, RadialGrid, CauchyState, Snapshot, RunRecord, FieldJetOnSlice

__all__ = [
    "Region",
    "RegionKind",
    "SpacetimePoint",
    "HyperboloidSlice",
    "SliceGrid3D",
    "ScalarField",
    "FieldOperator",
    "MultiIndex",
    "FrameMatrices",
    "CoefficientTensors",
    "NullVector",
    "SystemSpec",
    "RadialGrid",
    "CauchyState",
    "Snapshot",
    "RunRecord",
    "FieldJetOnSlice",
]
