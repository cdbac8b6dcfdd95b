"""
hyperfoil decay: weighted sup diagnostics along the T-ladder and their fitted exponents
"""
import argparse
from typing import Optional

from cli.deps import EXIT_CHECK_FAILED, EXIT_OK, add_common_options, dry_run, load_run_config, out_path
from core.errors import FitError
from core.logging import logger, log_check_result
from services.decay import DIAGNOSTIC_METRICS, decay_fit
from services.presets import run_preset
from services.reports import decay_series, write_csv, write_decay_svg

KG_EXPONENT = -1.5
KG_EXPONENT_TOL = 0.2
WAVE_VARIATION = 0.3

# metric checked for each preset when --metric is not given
DEFAULT_METRIC = {
    "free_kg": "sup_envelope",
    "free_wave": "sup_weighted",
}


def register(subparsers) -> None:
    parser = subparsers.add_parser("decay", help="Fit decay exponents of a preset run")
    add_common_options(parser)
    parser.add_argument("--preset", type=str, default=None, help="Preset name (overrides the config)")
    parser.add_argument("--epsilon", type=float, default=None, help="Data amplitude")
    parser.add_argument("--metric", choices=sorted(DIAGNOSTIC_METRICS), default=None,
                        help="Diagnostic that decides the exit code")
    parser.set_defaults(handler=run)


def variation(values) -> float:
    """(max - min) / max of a positive series"""
    top = max(values)
    return (top - min(values)) / top if top > 0 else 0.0


def check_decay(preset: str, metric: str, series, component: int = 0) -> Optional[bool]:
    """Exponent window for free_kg, bounded variation for free_wave, no verdict otherwise"""
    if preset == "free_kg" and metric in ("sup_interior", "sup_envelope"):
        fit = decay_fit(series, metric, DIAGNOSTIC_METRICS[metric], component)
        passed = abs(fit.exponent - KG_EXPONENT) <= KG_EXPONENT_TOL
        log_check_result("kg_decay_exponent", passed, fit.exponent, KG_EXPONENT, tolerance=KG_EXPONENT_TOL)
        return passed
    if preset == "free_wave" and metric in ("sup_weighted", "sup_bar"):
        v = variation([value for _, value in series])
        passed = v < WAVE_VARIATION
        log_check_result("wave_weighted_bounded", passed, v, WAVE_VARIATION)
        return passed
    return None


def run(args: argparse.Namespace) -> int:
    config = load_run_config(args, preset=args.preset, epsilon=args.epsilon)
    if args.dry_run:
        return dry_run(args, config)
    out = out_path(args)

    result = run_preset(config.preset, config.epsilon, config)
    write_csv(result.diagnostics, out / "diagnostics.csv")
    write_csv(result.fits, out / "decay.csv")
    write_decay_svg(result.diagnostics, result.fits, out / "decay.svg", title=config.preset)
    for fit in result.fits:
        print(f"{fit.metric}[{fit.component}] ({fit.region}): exponent {fit.exponent:+.3f} "
              f"+- {fit.stderr:.2g} over {fit.n_points} slices")

    metric = args.metric or DEFAULT_METRIC.get(config.preset)
    if metric is None:
        return EXIT_OK
    series = decay_series(result.diagnostics, metric, 0)
    try:
        verdict = check_decay(config.preset, metric, series)
    except FitError as e:
        print(f"FAIL {metric}: {e.message}")
        return EXIT_CHECK_FAILED
    if verdict is None:
        return EXIT_OK
    print(f"{metric}: {'PASS' if verdict else 'FAIL'}")
    logger.info("decay finished", preset=config.preset, metric=metric, passed=verdict)
    return EXIT_OK if verdict else EXIT_CHECK_FAILED
