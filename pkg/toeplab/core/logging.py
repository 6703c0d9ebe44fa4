"""Logging configuration."""
import logging

from toeplab.core.config import settings

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


def configure_logging(level: str | None = None) -> None:
    """Configure root logging for command line runs.

    Logs go to stderr so that reports on stdout and in the output
    directory stay byte-identical between runs.
    """
    logging.basicConfig(
        level=getattr(logging, (level or settings.LOG_LEVEL).upper()),
        format=LOG_FORMAT,
        force=True,
    )
