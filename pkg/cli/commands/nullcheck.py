"""
hyperfoil nullcheck FILE: null and weak-null conditions of a coefficient tensor file
"""
import argparse

from cli.deps import EXIT_CHECK_FAILED, EXIT_OK, add_common_options, dry_run, load_run_config, out_path
from core.config import settings
from core.logging import logger
from services.nullcond import check_null_condition, check_weak_null_sampled, sample_null_cone
from services.reports import write_csv
from services.tensor_io import load_tensors_file


def register(subparsers) -> None:
    parser = subparsers.add_parser("nullcheck", help="Check the null conditions of a tensor file")
    add_common_options(parser)
    parser.add_argument("file", type=str, help="Coefficient tensor file")
    parser.add_argument("--samples", type=int, default=100, help="Null covectors / directions to sample")
    parser.add_argument("--tol", type=float, default=None, help="Relative tolerance (default NULL_TOL)")
    parser.add_argument("--condition", choices=["null", "weak", "both"], default="both",
                        help="Which condition decides the exit code")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    config = load_run_config(args)
    tensors = load_tensors_file(args.file)
    if args.dry_run:
        return dry_run(args, config)

    tol = args.tol if args.tol is not None else settings.NULL_TOL
    null = check_null_condition(tensors, sample_null_cone(args.samples, config.seed), tol)
    weak_omega = check_weak_null_sampled(tensors, args.samples, config.seed, "omega", tol)
    weak_ext = check_weak_null_sampled(tensors, args.samples, config.seed, "exterior", tol)
    results = [null, weak_omega, weak_ext]
    write_csv(results, out_path(args) / "nullcheck.csv")

    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"{r.check:20s} {status}  relative violation {r.relative_violation:.3e}"
              + (f" ({r.worst_tensor})" if r.worst_tensor and not r.passed else ""))

    weak_ok = weak_omega.passed and weak_ext.passed
    if args.condition == "null":
        passed = null.passed
    elif args.condition == "weak":
        passed = weak_ok
    else:
        passed = null.passed and weak_ok
    logger.info("nullcheck finished", file=args.file, passed=passed)
    return EXIT_OK if passed else EXIT_CHECK_FAILED
