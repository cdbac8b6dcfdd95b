"""
hyperfoil commutators: identity battery and commutator-bound constants
"""
import argparse

from cli.deps import (
    EXIT_CHECK_FAILED, EXIT_OK, add_common_options, dry_run, load_run_config, out_path,
)
from core.config import settings
from core.logging import logger
from services.fields import test_family
from services.identities import (
    battery_passed, identity_registry, run_bound_battery, run_identity_battery,
)
from services.reports import write_csv


def register(subparsers) -> None:
    parser = subparsers.add_parser("commutators", help="Check the vector-field commutator identities")
    add_common_options(parser)
    parser.add_argument("--tol", type=float, default=None, help="Residual tolerance (default IDENTITY_TOL)")
    parser.add_argument("--list", action="store_true", help="Print identity ids and exit")
    parser.add_argument("--samples", type=int, default=100, help="Sample points per region")
    parser.add_argument("--bounds", action="store_true", help="Also measure commutator-bound constants")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    if args.list:
        for item in identity_registry.list_identities():
            flag = " (informational)" if item["informational"] == "true" else ""
            print(f"{item['identity_id']}\t{item['region']}\t{item['description']}{flag}")
        return EXIT_OK

    config = load_run_config(args)
    if args.dry_run:
        return dry_run(args, config)

    tol = args.tol if args.tol is not None else settings.IDENTITY_TOL
    fields = test_family()
    results = run_identity_battery(fields, n_samples=args.samples, seed=config.seed, tol=tol)
    out = out_path(args)
    write_csv(results, out / "commutators.csv")

    passed = battery_passed(results)
    checked = sorted({r.identity_id for r in results if not r.informational})
    print(f"identities checked: {len(checked)} ({len(results)} field checks)")
    for r in results:
        if not r.passed and not r.informational:
            print(f"FAIL {r.identity_id} on {r.field}: residual {r.max_residual:.3e} "
                  f"> {r.tolerance:.1e} (scale {r.scale:.3g})")

    if args.bounds:
        bounds = run_bound_battery(fields[:3], seed=config.seed)
        write_csv(bounds, out / "bounds.csv")
        failed = [b for b in bounds if not b.passed]
        for b in failed:
            print(f"UNSTABLE {b.lemma_id} |I|={b.order} on {b.field}: "
                  f"C={b.constant:.4g} -> {b.constant_refined:.4g}")
        passed = passed and not failed

    print("PASS" if passed else "FAIL")
    logger.info("commutators finished", passed=passed)
    return EXIT_OK if passed else EXIT_CHECK_FAILED
