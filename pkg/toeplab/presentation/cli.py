"""
Command line surface.

    toeplab run --config <path> [--out <dir>] [--check <name> ...] [--seed <u64>]
                [--tolerance-scale <x>]
    toeplab schema [--out <path>]
    toeplab version

Exit status: 0 when every selected check passes, 1 when a check fails,
2 on config or precondition errors, 3 on numerical errors.
"""

import argparse
import asyncio
import json
import logging
import sys
from pathlib import Path
from typing import Any

from pydantic import ValidationError

from toeplab import __version__
from toeplab.core.config import settings
from toeplab.core.exceptions import (
    CheckFailedException,
    ErrorCode,
    LabException,
    ValidationException,
)
from toeplab.core.logging import configure_logging
from toeplab.presentation.runners import RUNNERS, build_report, run_checks
from toeplab.presentation.writers import canonical_json, write_json, write_run
from toeplab.schemas.experiment import ExperimentConfig

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="toeplab",
        description=(
            "Toeplitz operators with quasi-homogeneous symbols on weighted Bergman spaces of Pn(C)."
        ),
    )
    parser.add_argument("--log-level", default=None, help="Override LOG_LEVEL")
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", help="Run the checks of an experiment config")
    run.add_argument("--config", dest="config_path", type=Path, required=True)
    run.add_argument(
        "--out", dest="out_dir", type=Path, help="Output directory (overrides output_dir)"
    )
    run.add_argument(
        "--check",
        dest="checks",
        action="extend",
        nargs="+",
        choices=sorted(RUNNERS),
        help="Checks to run (overrides the config)",
    )
    run.add_argument("--seed", type=int, help="Unsigned 64-bit seed (overrides the config)")
    run.add_argument(
        "--tolerance-scale",
        dest="tolerance_scale",
        type=float,
        help="Multiply every tolerance; exploratory runs only",
    )

    schema = commands.add_parser("schema", help="Print the JSON schema of experiment configs")
    schema.add_argument("--out", dest="out_path", type=Path)

    commands.add_parser("version", help="Print the tool version")
    return parser


def _validation_details(exc: ValidationError) -> list[dict[str, Any]]:
    return [
        {
            "loc": ".".join(str(part) for part in error["loc"]),
            "msg": error["msg"],
            "type": error["type"],
        }
        for error in exc.errors()
    ]


def load_config(
    path: Path,
    checks: list[str] | None = None,
    seed: int | None = None,
    out_dir: Path | None = None,
    tolerance_scale: float | None = None,
) -> ExperimentConfig:
    """Read, override and validate an experiment config."""
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ValidationException(
            message=f"cannot read config {path}: {exc.strerror}",
            error_code=ErrorCode.INVALID_CONFIG,
            details={"path": str(path)},
        ) from exc
    except json.JSONDecodeError as exc:
        raise ValidationException(
            message=f"config {path} is not valid JSON: {exc.msg}",
            error_code=ErrorCode.INVALID_CONFIG,
            details={"path": str(path), "line": exc.lineno, "column": exc.colno},
        ) from exc
    if not isinstance(raw, dict):
        raise ValidationException(
            message="config must be a JSON object", error_code=ErrorCode.INVALID_CONFIG
        )

    if checks:
        raw["checks"] = checks
    if seed is not None:
        raw["seed"] = seed
    if out_dir is not None:
        raw["output_dir"] = str(out_dir)
    try:
        config = ExperimentConfig.model_validate(raw)
    except ValidationError as exc:
        raise ValidationException(
            message=f"config {path} failed validation",
            error_code=ErrorCode.INVALID_CONFIG,
            details={"errors": _validation_details(exc)},
        ) from exc

    if tolerance_scale is not None:
        if tolerance_scale <= 0:
            raise ValidationException(
                message="--tolerance-scale must be positive",
                error_code=ErrorCode.INVALID_CONFIG,
            )
        logger.warning("Tolerances scaled by %g; results are exploratory", tolerance_scale)
        config = config.model_copy(update={"tolerances": config.tolerances.scaled(tolerance_scale)})
    return config


def _run(args: argparse.Namespace) -> int:
    config = load_config(
        args.config_path, args.checks, args.seed, args.out_dir, args.tolerance_scale
    )
    logger.info("Running %s: checks=%s", config.name, ",".join(config.checks))
    checks = asyncio.run(run_checks(config))
    report = build_report(config, checks)
    write_run(report, Path(config.output_dir))
    print(canonical_json({"passed": report.passed, "checks": {c.check: c.passed for c in checks}}))
    if not report.passed:
        raise CheckFailedException(
            message=f"{len(report.failed_checks)} check(s) failed",
            details={"failed": report.failed_checks, "output_dir": config.output_dir},
        )
    return 0


def _schema(args: argparse.Namespace) -> int:
    schema = ExperimentConfig.model_json_schema()
    if args.out_path is not None:
        write_json(args.out_path, schema)
    else:
        print(canonical_json(schema))
    return 0


def main(argv: list[str] | None = None) -> int:
    """Parse arguments, dispatch and map errors to exit codes."""
    args = build_parser().parse_args(argv)
    if args.log_level:
        configure_logging(args.log_level)
    try:
        if args.command == "run":
            return _run(args)
        if args.command == "schema":
            return _schema(args)
        print(f"{settings.APP_NAME} {__version__}")
        return 0
    except LabException as exc:
        logger.error("%s", exc)
        print(canonical_json(exc.to_dict()), file=sys.stderr)
        return exc.exit_code
