"""
hyperfoil energy: energy identities, inequalities and curved-energy comparability
"""
import argparse

from cli.deps import EXIT_CHECK_FAILED, EXIT_OK, add_common_options, dry_run, load_run_config, out_path
from core.logging import logger
from services.energy import energy_identity_battery, radial_gaussian_jet, tangential_bound_check
from services.presets import manufactured_inequality, manufactured_refinement, run_preset
from services.reports import write_csv

CURVED_TOY_G = 0.05


def register(subparsers) -> None:
    parser = subparsers.add_parser("energy", help="Check the hyperboloidal energy identities and bounds")
    add_common_options(parser)
    parser.add_argument("--states", type=int, default=1000, help="Random node states for the identity battery")
    parser.add_argument("--skip-runs", action="store_true",
                        help="Only the checks that need no evolution")
    parser.add_argument("--refine", action="store_true",
                        help="Repeat the manufactured inequality at dr/2 and compare margins")
    parser.add_argument("--toy-g", type=float, default=CURVED_TOY_G,
                        help="Bound on the toy metric perturbation for the comparability run")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    config = load_run_config(args)
    if args.dry_run:
        return dry_run(args, config)
    out = out_path(args)
    failures = []

    battery = energy_identity_battery(args.states, seed=config.seed)
    write_csv([battery], out / "energy_identity.csv")
    print(f"energy identity: pointwise {battery.max_pointwise_spread:.2e}, "
          f"integrated {battery.max_integrated_spread:.2e} {'PASS' if battery.passed else 'FAIL'}")
    if not battery.passed:
        failures.append("energy_identity")

    tangential = [tangential_bound_check(radial_gaussian_jet(T, incoming=incoming))
                  for T in (3.0, 5.0, 8.0) for incoming in (True, False)]
    write_csv(tangential, out / "tangential.csv")
    worst = max(tangential, key=lambda rep: rep.ratio)
    print(f"tangential energy <= {worst.bound_factor:g} E_m: worst ratio {worst.ratio:.4f} "
          f"{'PASS' if all(rep.passed for rep in tangential) else 'FAIL'}")
    if not all(rep.passed for rep in tangential):
        failures.append("tangential")

    if not args.skip_runs:
        rows, refined = [], []
        for mass in (0.0, 1.0):
            coarse = manufactured_inequality(config, mass)
            rows.extend(coarse)
            if args.refine:
                refined.extend(manufactured_refinement(config, mass, coarse_rows=coarse))
        write_csv(rows, out / "inequality_manufactured.csv")
        worst_margin = min(row.margin for row in rows)
        ok = all(row.passed for row in rows)
        print(f"manufactured energy inequality: worst margin {worst_margin:+.3e} {'PASS' if ok else 'FAIL'}")
        if not ok:
            failures.append("manufactured_inequality")
        if args.refine:
            write_csv(refined, out / "refinement.csv")
            ok = all(row.passed for row in refined)
            print(f"manufactured margin under dr/2: {sum(row.passed for row in refined)}/{len(refined)} slices "
                  f"{'PASS' if ok else 'FAIL'}")
            if not ok:
                failures.append("manufactured_refinement")

        curved_cfg = config.model_copy(update={"toy_G": args.toy_g})
        result = run_preset(config.preset, config.epsilon, curved_cfg)
        write_csv(result.curved, out / "curved.csv")
        ok = bool(result.curved) and all(rep.comparable for rep in result.curved)
        print(f"curved energy comparability (|g| <= {args.toy_g:g}): "
              f"{len(result.curved)} slices {'PASS' if ok else 'FAIL'}")
        if not ok:
            failures.append("curved_comparability")

    logger.info("energy finished", failures=failures)
    print("PASS" if not failures else f"FAIL: {', '.join(failures)}")
    return EXIT_OK if not failures else EXIT_CHECK_FAILED
