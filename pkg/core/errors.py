"""
Custom exception classes for the hyperfoil toolkit
"""
from typing import Any, Dict, Optional


class HyperfoilError(Exception):
    """Base exception class for hyperfoil"""

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        self.message = message
        self.details = details or {}
        super().__init__(self.message)

    def to_dict(self) -> Dict[str, Any]:
        """Convert exception to dictionary"""
        return {
            "error_type": self.__class__.__name__,
            "message": self.message,
            "details": self.details
        }


class DomainError(HyperfoilError):
    """Raised when a point lies outside the domain of an operation"""
    pass


class EmptySliceError(HyperfoilError):
    """Raised when a hyperboloid slice restricted to a region has no nodes"""
    pass


class DerivativeOrderError(HyperfoilError):
    """Raised when a field has no derivative order left"""
    pass


class UnknownIdentityError(HyperfoilError):
    """Raised when an identity or lemma id is not registered"""
    pass


class TensorParseError(HyperfoilError):
    """Raised when a coefficient tensor file cannot be parsed"""

    def __init__(self, message: str, line: int, column: int, details: Optional[Dict[str, Any]] = None):
        self.line = line
        self.column = column
        merged = {"line": line, "column": column, **(details or {})}
        super().__init__(f"{message} (line {line}, column {column})", merged)


class ValidationError(HyperfoilError):
    """Raised when data validation fails"""
    pass


class SymmetryError(ValidationError):
    """Raised when quasilinear coefficients violate G_i^{jab} = G_j^{iba}"""
    pass


class StructuralZeroError(ValidationError):
    """Raised when a coefficient required to vanish in the coupled regime is nonzero"""
    pass


class ConfigurationError(HyperfoilError):
    """Raised when configuration is invalid"""
    pass


class CoverageError(HyperfoilError):
    """Raised when a run does not cover the t-extent of a requested slice"""
    pass


class NumericalBlowupError(HyperfoilError):
    """Raised when the evolution produces non-finite or runaway values"""
    pass


class FitError(HyperfoilError):
    """Raised when a decay fit cannot be performed"""
    pass


class PresetError(HyperfoilError):
    """Raised when a preset is unknown or misconfigured"""
    pass


class EnergyIdentityError(HyperfoilError):
    """Raised when the three energy integrands disagree beyond tolerance"""
    pass
