"""
Identity battery: residuals of the commutator identities on sampled points
"""
from typing import Iterable, List, Optional

import numpy as np

from core.config import settings
from core.errors import DerivativeOrderError, DomainError
from core.logging import logger, log_check_result
from models.field import ScalarField
from schemas.checks import IdentityResult
from services.fields import evaluate_many, sample_points, test_family
from services.identities.base import get_identity, identity_registry
import services.identities.catalog  # noqa: F401  registers the catalog


def restrict_to_region(points: np.ndarray, region: str) -> np.ndarray:
    """Keep points of Lambda' with r > 0, and r >= t/2 for the exterior region"""
    t = points[:, 0]
    r = np.linalg.norm(points[:, 1:], axis=1)
    keep = (r > 0) & (r <= t - 1.0)
    if region == "exterior":
        keep &= r >= t / 2.0
    return points[keep]


def check_commutator(identity_id: str, f: ScalarField, points: np.ndarray,
                     tol: Optional[float] = None) -> IdentityResult:
    """
    Max |lhs - rhs| of an identity over the sample points inside its region

    Passes when the residual is at most tol. The reported scale is the
    largest magnitude of either side.
    """
    identity = get_identity(identity_id)
    tol = settings.IDENTITY_TOL if tol is None else tol
    if f.order < identity.order:
        raise DerivativeOrderError(
            f"{identity_id} needs {identity.order} derivatives, {f.name} has {f.order}",
            {"identity_id": identity_id, "field": f.name}
        )
    pts = restrict_to_region(np.atleast_2d(points), identity.region)
    if pts.shape[0] == 0:
        raise DomainError(f"No sample points inside the region of {identity_id}",
                          {"region": identity.region})

    pairs = identity.sides(f.expr)
    lhs = [p[0] for p in pairs]
    rhs = [p[1] for p in pairs]
    values = evaluate_many(lhs + rhs, pts, needs_r=True, needs_t=True)
    left, right = values[:len(pairs)], values[len(pairs):]

    residual = float(np.max(np.abs(left - right)))
    scale = float(max(np.max(np.abs(left)), np.max(np.abs(right))))
    passed = bool(np.isfinite(residual) and residual <= tol)

    if identity.informational:
        logger.info(f"Informational identity {identity_id}", field=f.name, residual=residual)
    else:
        log_check_result(identity_id, passed, residual, tol, field=f.name)

    return IdentityResult(
        identity_id=identity_id,
        field=f.name,
        region=identity.region,
        n_points=int(pts.shape[0]),
        max_residual=residual,
        scale=scale,
        tolerance=tol,
        passed=passed,
        informational=identity.informational,
    )


def run_identity_battery(
    fields: Optional[Iterable[ScalarField]] = None,
    n_samples: int = 100,
    seed: int = 0,
    tol: Optional[float] = None,
    identity_ids: Optional[List[str]] = None,
) -> List[IdentityResult]:
    """Every registered identity on every field of the family"""
    fields = list(fields) if fields is not None else test_family()
    ids = identity_ids or identity_registry.ids()
    samples = {
        "lambda": sample_points(n_samples, seed, "lambda"),
        "exterior": sample_points(n_samples, seed + 1, "exterior"),
    }
    results = []
    for identity_id in ids:
        identity = get_identity(identity_id)
        for f in fields:
            results.append(check_commutator(identity_id, f, samples[identity.region], tol))
    failed = [r for r in results if not r.passed and not r.informational]
    logger.info(
        "Identity battery completed",
        n_checks=len(results),
        n_failed=len(failed),
        n_fields=len(fields),
    )
    return results


def battery_passed(results: List[IdentityResult]) -> bool:
    return all(r.passed for r in results if not r.informational)
