"""
Audit service for configuration hashing and run provenance
"""
import hashlib
import json
from typing import Any, Dict

from core.config import settings
from core.logging import logger
from models.state import RunRecord


def make_config_hash(payload: Dict[str, Any]) -> str:
    """
    Create hash for audit trail of a run configuration

    Args:
        payload: Dictionary to hash

    Returns:
        SHA-256 hash as hex string
    """
    # Canonical JSON: sorted keys, no whitespace variance
    json_str = json.dumps(payload, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(json_str.encode("utf-8")).hexdigest()


def run_metadata(record: RunRecord) -> Dict[str, Any]:
    """
    Provenance block written next to the reports of a run

    Args:
        record: Finished run

    Returns:
        Dictionary with hash, seed, coverage and truncation details
    """
    return {
        "app": settings.APP_NAME,
        "version": settings.APP_VERSION,
        "run_id": record.run_id,
        "system": record.spec.name,
        "config_hash": record.config_hash,
        "seed": record.seed,
        "t_start": record.t_start,
        "t_final": record.t_final,
        "t_end": record.t_end,
        "dr": record.grid.dr,
        "cfl": record.grid.cfl,
        "n_snapshots": len(record.snapshots),
        "truncated": record.truncated,
        "truncation_time": record.truncation_time,
        "support_ok": record.support_ok,
    }


def verify_config_hash(payload: Dict[str, Any], expected_hash: str) -> bool:
    """
    Verify a stored run against its configuration

    Args:
        payload: Configuration dictionary
        expected_hash: Hash recorded on the run

    Returns:
        True if hashes match
    """
    matches = make_config_hash(payload) == expected_hash
    if not matches:
        logger.warning("Configuration hash mismatch", expected=expected_hash)
    return matches
