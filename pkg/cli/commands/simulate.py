"""
hyperfoil simulate: evolve a preset and write run, slice, inequality and decay reports
"""
import argparse

from cli.deps import (
    EXIT_CHECK_FAILED, EXIT_OK, EXIT_TRUNCATED, add_common_options, dry_run, load_run_config, out_path,
)
from core.logging import logger
from services.audit import run_metadata
from services.presets import lifespan_monotone, lifespan_sweep, null_contrast, run_preset
from services.reports import SLICE_COLUMNS, write_csv, write_decay_svg, write_metadata


def register(subparsers) -> None:
    parser = subparsers.add_parser("simulate", help="Evolve a preset and report along the T-ladder")
    add_common_options(parser)
    parser.add_argument("--preset", type=str, default=None, help="Preset name (overrides the config)")
    parser.add_argument("--epsilon", type=float, default=None, help="Data amplitude")
    parser.add_argument("--contrast", action="store_true",
                        help="Run null_wave against nonnull_wave at the same amplitude")
    parser.add_argument("--lifespan", type=float, nargs="+", default=None, metavar="EPS",
                        help="Lifespan of nonnull_wave for each amplitude")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    config = load_run_config(args, preset=args.preset, epsilon=args.epsilon)
    if args.dry_run:
        return dry_run(args, config)
    out = out_path(args)

    if args.contrast:
        report = null_contrast(config.epsilon if args.epsilon is not None else 0.3, config)
        write_csv([report], out / "contrast.csv")
        print(f"null vs non-null at eps={report.epsilon}: {report.outcome}")
        return EXIT_OK if report.passed else EXIT_CHECK_FAILED

    if args.lifespan:
        rows = lifespan_sweep(args.lifespan, config)
        write_csv(rows, out / "lifespan.csv")
        for row in rows:
            print(f"eps={row.epsilon:g}  lifespan={row.lifespan:.3f}{'  (truncated)' if row.truncated else ''}")
        monotone = lifespan_monotone(rows)
        print("lifespan monotone" if monotone else "lifespan NOT monotone")
        return EXIT_OK if monotone else EXIT_CHECK_FAILED

    result = run_preset(config.preset, config.epsilon, config)
    record = result.record
    write_csv(result.run_rows, out / "run.csv")
    write_csv(result.slice_rows, out / "slices.csv", SLICE_COLUMNS)
    write_csv(result.inequality, out / "inequality.csv")
    write_csv(result.bootstrap, out / "bootstrap.csv")
    write_csv(result.fits, out / "decay.csv")
    write_decay_svg(result.diagnostics, result.fits, out / "decay.svg", title=config.preset)
    meta = run_metadata(record)
    meta.update(uncovered=result.uncovered, bridge_ratio=result.bridge_ratio)
    write_metadata(meta, out / "run.json")

    print(f"run {record.run_id}: {config.preset} eps={config.epsilon:g} "
          f"t=[{record.t_start:g}, {record.t_end:g}] slices={len(result.ladder) - len(result.uncovered)}")
    for fit in result.fits:
        print(f"  decay {fit.metric}[{fit.component}] ~ T^{fit.exponent:+.3f} (stderr {fit.stderr:.2g})")
    if result.uncovered:
        print(f"  uncovered slices: {result.uncovered}")

    if record.truncated:
        print(f"TRUNCATED at t={record.truncation_time:g}")
        logger.info("simulate finished", run_id=record.run_id, truncated=True)
        return EXIT_TRUNCATED
    failed = [row for row in result.inequality if not row.passed]
    for row in failed:
        print(f"FAIL energy inequality on H_{row.T} component {row.component}: margin {row.margin:.3e}")
    violated = [row for row in result.bootstrap if not row.passed]
    for row in violated:
        print(f"FAIL bootstrap {row.kind} bound at s={row.s:g} component {row.component}: "
              f"{row.energy_sqrt:.3e} > {row.bound:.3e}")
    logger.info("simulate finished", run_id=record.run_id, failed=len(failed), bootstrap_failed=len(violated))
    return EXIT_CHECK_FAILED if failed or violated else EXIT_OK
