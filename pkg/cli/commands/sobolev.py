"""
hyperfoil sobolev: hyperboloidal Sobolev ratio of fixed profiles across T
"""
import argparse
from typing import Dict, List

from cli.deps import EXIT_CHECK_FAILED, EXIT_OK, add_common_options, dry_run, load_run_config, out_path
from core.logging import log_check_result, logger
from schemas.checks import SobolevRow
from services.energy import sobolev_profiles, sobolev_ratio
from services.executor import executor
from services.reports import write_csv

SOBOLEV_VARIATION = 0.2


def register(subparsers) -> None:
    parser = subparsers.add_parser("sobolev", help="Sobolev ratio of boost-invariant profiles")
    add_common_options(parser)
    parser.add_argument("--T", dest="T_values", type=float, nargs="+", default=[4.0, 8.0, 16.0, 32.0],
                        help="Hyperboloid radii")
    parser.add_argument("--radial", type=int, default=48, help="Radial nodes of the 3-D slice grid")
    parser.set_defaults(handler=run)


def ratio_variation(rows: List[SobolevRow]) -> Dict[str, float]:
    """(max - min) / max of the ratio per profile"""
    by_profile: Dict[str, List[float]] = {}
    for row in rows:
        by_profile.setdefault(row.profile, []).append(row.ratio)
    return {name: (max(v) - min(v)) / max(v) if max(v) > 0 else 0.0 for name, v in by_profile.items()}


def run(args: argparse.Namespace) -> int:
    config = load_run_config(args)
    if args.dry_run:
        return dry_run(args, config)

    jobs = [(f, T, args.radial) for f in sobolev_profiles() for T in args.T_values]
    rows = executor.map(sobolev_ratio, jobs)
    write_csv(rows, out_path(args) / "sobolev.csv")

    passed = True
    for name, v in ratio_variation(rows).items():
        ok = v < SOBOLEV_VARIATION
        log_check_result("sobolev_ratio_variation", ok, v, SOBOLEV_VARIATION, profile=name)
        print(f"{name:10s} variation {v:.3f} {'PASS' if ok else 'FAIL'}")
        passed = passed and ok
    logger.info("sobolev finished", passed=passed)
    return EXIT_OK if passed else EXIT_CHECK_FAILED
