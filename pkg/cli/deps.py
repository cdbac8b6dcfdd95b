"""
Shared CLI dependencies: common options, config loading, output directory
"""
import argparse
import json
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import ValidationError as PydanticValidationError

from core.config import settings
from core.errors import ConfigurationError
from core.logging import logger
from schemas.config import CliConfig, RunConfig
from services.reports import ensure_out_dir

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG_ERROR = 2
EXIT_TRUNCATED = 3


def add_common_options(parser: argparse.ArgumentParser) -> None:
    """Options every subcommand accepts"""
    parser.add_argument("--config", type=str, default=None, help="TOML or JSON run configuration")
    parser.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
                        help="Override one configuration key (repeatable)")
    parser.add_argument("--out", type=str, default=None, help="Output directory (env HYPERFOIL_OUT)")
    parser.add_argument("--seed", type=int, default=None, help="Random seed (default 0)")
    parser.add_argument("--dry-run", action="store_true", help="Validate the configuration and stop")


def parse_value(raw: str) -> Any:
    """TOML scalar or array, falling back to the plain string"""
    try:
        return tomllib.loads(f"value = {raw}")["value"]
    except tomllib.TOMLDecodeError:
        return raw


def parse_overrides(items: List[str]) -> Dict[str, Any]:
    out: Dict[str, Any] = {}
    for item in items:
        if "=" not in item:
            raise ConfigurationError(f"Override '{item}' is not KEY=VALUE", {"override": item})
        key, raw = item.split("=", 1)
        out[key.strip()] = parse_value(raw.strip())
    return out


def read_config_file(path: str) -> Dict[str, Any]:
    p = Path(path)
    if not p.is_file():
        raise ConfigurationError(f"Config file not found: {path}", {"path": path})
    text = p.read_text(encoding="utf-8")
    try:
        if p.suffix == ".json":
            return json.loads(text)
        return tomllib.loads(text)
    except (json.JSONDecodeError, tomllib.TOMLDecodeError) as e:
        raise ConfigurationError(f"Cannot parse {path}: {e}", {"path": path})


def load_run_config(args: argparse.Namespace, **defaults: Any) -> RunConfig:
    """File values, then subcommand options given on the command line, then --set, then --seed"""
    data: Dict[str, Any] = {}
    if getattr(args, "config", None):
        data.update(read_config_file(args.config))
    for key, value in defaults.items():
        if value is not None:
            data[key] = value
    data.update(parse_overrides(getattr(args, "overrides", []) or []))
    if getattr(args, "seed", None) is not None:
        data["seed"] = args.seed
    try:
        return RunConfig(**data)
    except PydanticValidationError as e:
        raise ConfigurationError(f"Invalid configuration: {e.errors()[0]['msg']}",
                                 {"errors": [err["loc"] for err in e.errors()]})


def cli_config(args: argparse.Namespace) -> CliConfig:
    return CliConfig(
        subcommand=args.command,
        config_path=getattr(args, "config", None),
        overrides={k: str(v) for k, v in parse_overrides(getattr(args, "overrides", []) or []).items()},
        out_dir=resolve_out_dir(args),
        seed=args.seed if getattr(args, "seed", None) is not None else 0,
        dry_run=bool(getattr(args, "dry_run", False)),
    )


def resolve_out_dir(args: argparse.Namespace) -> str:
    return getattr(args, "out", None) or settings.OUT


def out_path(args: argparse.Namespace) -> Path:
    return ensure_out_dir(resolve_out_dir(args))


def dry_run(args: argparse.Namespace, config: Optional[RunConfig] = None) -> int:
    """Print the resolved invocation and configuration without computing"""
    payload = {"cli": cli_config(args).model_dump()}
    if config is not None:
        payload["config"] = config.model_dump()
    print(json.dumps(payload, sort_keys=True, indent=2))
    logger.info("Dry run: configuration valid", command=args.command)
    return EXIT_OK
