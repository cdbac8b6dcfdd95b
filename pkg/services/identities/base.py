"""
Base identity classes and registry
"""
from abc import ABC, abstractmethod
from typing import Callable, Dict, List, Optional, Protocol, Tuple

import sympy as sp

from core.errors import UnknownIdentityError

SidePair = Tuple[sp.Expr, sp.Expr]


class Identity(Protocol):
    """Protocol for commutator identities of the vector-field algebra"""

    @property
    def identity_id(self) -> str:
        """Unique identifier for the identity"""
        ...

    @property
    def description(self) -> str:
        """Human readable statement"""
        ...

    @property
    def region(self) -> str:
        """'lambda' or 'exterior' (r >= t/2)"""
        ...

    @property
    def informational(self) -> bool:
        """Evaluated and reported but never counted toward pass/fail"""
        ...

    @property
    def order(self) -> int:
        """Derivative order consumed from the test field"""
        ...

    def sides(self, u: sp.Expr) -> List[SidePair]:
        """
        Left and right sides for every index combination

        Args:
            u: Closed-form test function

        Returns:
            List of (lhs, rhs) expression pairs
        """
        ...


class BaseIdentity(ABC):
    """Abstract base class for identities"""

    region: str = "lambda"
    informational: bool = False
    order: int = 2

    @property
    @abstractmethod
    def identity_id(self) -> str:
        pass

    @property
    @abstractmethod
    def description(self) -> str:
        pass

    @abstractmethod
    def sides(self, u: sp.Expr) -> List[SidePair]:
        pass


class ExprIdentity(BaseIdentity):
    """Identity given by a function building its side pairs"""

    def __init__(self, identity_id: str, description: str, builder: Callable[[sp.Expr], List[SidePair]],
                 region: str = "lambda", order: int = 2, informational: bool = False):
        self._id = identity_id
        self._description = description
        self._builder = builder
        self.region = region
        self.order = order
        self.informational = informational

    @property
    def identity_id(self) -> str:
        return self._id

    @property
    def description(self) -> str:
        return self._description

    def sides(self, u: sp.Expr) -> List[SidePair]:
        return self._builder(u)


class IdentityRegistry:
    """Registry for available identities"""

    def __init__(self):
        self._identities: Dict[str, Identity] = {}

    def register(self, identity: Identity):
        """Register an identity"""
        self._identities[identity.identity_id] = identity

    def get_identity(self, identity_id: str) -> Optional[Identity]:
        """Get identity by ID"""
        return self._identities.get(identity_id)

    def list_identities(self, include_informational: bool = True) -> List[Dict[str, str]]:
        """List registered identities in registration order"""
        return [
            {
                "identity_id": identity.identity_id,
                "region": identity.region,
                "informational": str(identity.informational).lower(),
                "description": identity.description,
            }
            for identity in self._identities.values()
            if include_informational or not identity.informational
        ]

    def ids(self, include_informational: bool = True) -> List[str]:
        return [row["identity_id"] for row in self.list_identities(include_informational)]

    def is_valid_identity(self, identity_id: str) -> bool:
        return identity_id in self._identities


# Global identity registry
identity_registry = IdentityRegistry()


def get_identity(identity_id: str) -> Identity:
    """Get identity instance by ID"""
    identity = identity_registry.get_identity(identity_id)
    if identity is None:
        raise UnknownIdentityError(f"Unknown identity: {identity_id}", {"identity_id": identity_id})
    return identity
