import argparse
import logging
import sys
from typing import List, Optional

from pydantic import ValidationError

from geodetect.core.config import load_settings
from geodetect.core.exceptions import DataFormatError
from geodetect.core.routing import CommandRouter, argument

# Import Feature Routers
from geodetect.experiments.router import router as experiments_router
from geodetect.generators.router import router as generators_router
from geodetect.inference.router import router as inference_router
from geodetect.oracle.router import router as oracle_router
from geodetect.triangles.router import router as triangles_router

logger = logging.getLogger(__name__)

EXIT_USAGE = 1
EXIT_DATA = 2

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"

GLOBAL_ARGUMENTS = (
    argument("--seed", type=int, help="master seed"),
    argument("--jobs", type=int, help="worker threads"),
    argument("--out", help="output directory"),
    argument("--config", help="key-value config file (GEODETECT_<FIELD>=value)"),
    argument("--log-level", choices=["DEBUG", "INFO", "WARNING", "ERROR"]),
)


class UsageErrorParser(argparse.ArgumentParser):
    """argparse parser whose usage errors exit with status 1."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# Construct Command Router
cli_router = CommandRouter()
cli_router.include_router(generators_router)
cli_router.include_router(triangles_router)
cli_router.include_router(inference_router)
cli_router.include_router(experiments_router)
cli_router.include_router(oracle_router)


def build_parser() -> argparse.ArgumentParser:
    return cli_router.build_parser("geodetect", GLOBAL_ARGUMENTS, parser_class=UsageErrorParser)


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        settings = load_settings(
            getattr(args, "config", None),
            SEED=getattr(args, "seed", None),
            JOBS=getattr(args, "jobs", None),
            OUT=getattr(args, "out", None),
            LOG_LEVEL=getattr(args, "log_level", None),
        )
    except ValidationError as e:
        print(f"geodetect: invalid configuration: {e}", file=sys.stderr)
        return EXIT_USAGE

    logging.basicConfig(level=settings.LOG_LEVEL, format=LOG_FORMAT, stream=sys.stderr, force=True)
    logger.debug(f"Running {args.command} with seed={settings.SEED}, jobs={settings.JOBS}")

    try:
        return args.handler(args, settings)
    except DataFormatError as e:
        logger.error(f"Data error: {e}")
        return EXIT_DATA
    except (ValidationError, ValueError) as e:
        logger.error(f"Invalid parameters: {e}")
        return EXIT_USAGE
    except OSError as e:
        logger.error(f"I/O error: {e}")
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
