# src/main.py
"""
Command-line entrypoint: python -m src.main <subcommand> [options]
"""
import argparse
import asyncio
import sys
from pathlib import Path
from typing import Optional, Sequence

from src.core.config import settings
from src.core.constants import ScanParameter, Subcommand
from src.core.dependencies import cleanup_services
from src.core.exception import BaseAppException
from src.core.logging import log_error, logger, setup_logging
from src.services.io.commands import RunOptions, run_subcommand
from src.services.io.loader import load_config


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="twinbeam", description=settings.APP_NAME)
    parser.add_argument("command", choices=[c.value for c in Subcommand])
    parser.add_argument("--config", type=Path, default=None, help="YAML scenario file")
    parser.add_argument("--out", type=Path, default=None, help="output directory")
    parser.add_argument("--power", type=float, action="append", default=[], help="pump power in W (repeatable)")
    parser.add_argument("--threads", type=int, default=None, help="worker threads")
    parser.add_argument("--scan", choices=[p.value for p in ScanParameter], default=None)
    parser.add_argument("--value", type=float, action="append", default=[], help="scan value (repeatable)")
    parser.add_argument("--log-level", default=None)
    return parser


async def run(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    options = RunOptions(
        out_dir=args.out or config.output.directory,
        powers=args.power,
        threads=args.threads,
        scan=ScanParameter(args.scan) if args.scan else None,
        scan_values=args.value,
    )
    try:
        await run_subcommand(Subcommand(args.command), config, options)
    finally:
        await cleanup_services()
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.scan and not args.value:
        parser.error("--scan needs at least one --value")
    if args.threads is not None and args.threads < 1:
        parser.error("--threads must be positive")

    setup_logging(args.log_level)
    logger.info(f"🚀 {settings.APP_NAME} {settings.APP_VERSION}: {args.command}")
    try:
        return asyncio.run(run(args))
    except BaseAppException as e:
        log_error(e, e.details)
        print(f"error: {type(e).__name__}: {e.message}", file=sys.stderr)
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
