"""
Main entry point.

Configures logging from settings and hands over to the command line.
"""

import logging

from toeplab.core.config import settings
from toeplab.core.logging import configure_logging
from toeplab.presentation import cli

logger = logging.getLogger(__name__)


def main(argv: list[str] | None = None) -> int:
    configure_logging()
    logger.debug(
        "Starting %s %s (%s)", settings.APP_NAME, settings.APP_VERSION, settings.ENVIRONMENT
    )
    return cli.main(argv)


if __name__ == "__main__":
    raise SystemExit(main())
