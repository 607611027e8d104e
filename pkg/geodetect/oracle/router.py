"""
Oracle Router

`oracle-check`: runs the verification suite, writes oracle_report.json and
exits with 3 when any check fails.
"""

import logging

from geodetect.core.config import Settings
from geodetect.core.deps import emit, get_output_dir
from geodetect.core.routing import CommandRouter, argument
from geodetect.oracle.constants import ORACLE_FAILURE_EXIT_CODE, REPORT_FILENAME
from geodetect.oracle.service import run_suite

logger = logging.getLogger(__name__)

router = CommandRouter()


@router.command(
    "oracle-check",
    argument("--quick", action="store_true", help="smaller degree checks and fewer replicas"),
    help="verify samplers and statistics against independent oracles",
)
def oracle_check_command(args, settings: Settings) -> int:
    reports = run_suite(seed=settings.SEED, quick=args.quick)
    failed = [report.name for report in reports if not report.passed]
    emit(
        {
            "passed": not failed,
            "failed": failed,
            "checks": [report.model_dump(mode="json", by_alias=True) for report in reports],
        },
        get_output_dir(settings) / REPORT_FILENAME,
        params=f"oracle-check;quick={int(args.quick)}",
        seed=settings.SEED,
    )
    if failed:
        logger.error(f"Oracle checks failed: {', '.join(failed)}")
        return ORACLE_FAILURE_EXIT_CODE
    return 0
