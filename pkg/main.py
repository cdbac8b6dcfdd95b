"""
hyperfoil command-line entry point
"""
import argparse
import json
import sys
from typing import List, Optional

from cli.commands import commutators, decay, energy, nullcheck, simulate, sobolev
from cli.deps import EXIT_CHECK_FAILED, EXIT_CONFIG_ERROR, EXIT_OK
from core.config import MASS_NORMALIZATIONS, QUADRATURE_RULES, settings
from core.errors import FitError, HyperfoilError
from core.logging import log_error, logger

COMMANDS = [commutators, nullcheck, simulate, energy, decay, sobolev]


def app_info(args: argparse.Namespace) -> int:
    """Application information"""
    from services.identities import identity_registry
    from services.presets import PRESET_REGISTRY

    info = {
        "app": {
            "name": settings.APP_NAME,
            "version": settings.APP_VERSION,
            "debug": settings.DEBUG,
        },
        "output": settings.OUT,
        "workers": settings.MAX_WORKERS,
        "quadrature": {"default": settings.QUADRATURE, "nodes": settings.SLICE_NODES,
                       "rules": QUADRATURE_RULES},
        "mass_normalization": {"default": settings.MASS_NORMALIZATION,
                               "choices": sorted(MASS_NORMALIZATIONS)},
        "presets": {name: p.description for name, p in PRESET_REGISTRY.items()},
        "identities": len(identity_registry.list_identities()),
    }
    print(json.dumps(info, indent=2, sort_keys=True))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=settings.APP_NAME,
        description="Hyperboloidal foliation checks and a radial wave/Klein-Gordon simulator",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {settings.APP_VERSION}")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for command in COMMANDS:
        command.register(subparsers)
    info = subparsers.add_parser("info", help="Print settings, presets and registries")
    info.set_defaults(handler=app_info)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Run one subcommand and map errors to exit codes"""
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except FitError as e:
        log_error("-", args.command, e, details=e.details)
        print(f"error: {e.message}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    except HyperfoilError as e:
        log_error("-", args.command, e, details=e.details)
        print(f"error: {e.message}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    except FileNotFoundError as e:
        log_error("-", args.command, e)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    except KeyboardInterrupt:
        logger.warning("Interrupted", command=args.command)
        return 130


if __name__ == "__main__":
    sys.exit(main())
