from services.identities.base import identity_registry, get_identity
from services.identities.checks import check_commutator, run_identity_battery, battery_passed
from services.identities.bounds import check_commutator_bound, run_bound_battery, list_lemmas

__all__ = [
    "identity_registry",
    "get_identity",
    "check_commutator",
    "run_identity_battery",
    "battery_passed",
    "check_commutator_bound",
    "run_bound_battery",
    "list_lemmas",
]
