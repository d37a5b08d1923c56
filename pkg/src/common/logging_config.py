"""
Logging configuration for the command line tool.

Console output goes to stderr so that stdout stays free for results. When an
output directory is known, a rotating log file is written next to the
results; the file always records DEBUG, the console honours --quiet.
"""

import sys
import logging
from pathlib import Path
from logging.handlers import RotatingFileHandler
from typing import Optional

import config.constants as constants

try:
    from _version import __version__
except ImportError:  # running from an unbuilt source tree
    __version__ = "0+unknown"

logger = logging.getLogger(__name__)

LOG_FORMAT = '%(asctime)s - %(levelname)s - %(message)s'


def setup_logging(app_name: str, log_dir: Optional[Path] = None, quiet: bool = False) -> None:
    """Setup logging for a command line run.

    Args:
        app_name: Name of the application for logging messages
        log_dir: Directory for the rotating log file, or None for console only
        quiet: Only show warnings and errors on the console
    """
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(logging.WARNING if quiet else logging.INFO)
    handlers: list[logging.Handler] = [console_handler]

    if log_dir:
        log_file = log_dir / constants.LOG_FILE
        try:
            log_dir.mkdir(parents=True, exist_ok=True)
            file_handler = RotatingFileHandler(
                log_file,
                maxBytes=10 * 1024 * 1024,  # 10 MB
                backupCount=5,
                encoding="utf-8",
            )
            file_handler.setLevel(logging.DEBUG)
            handlers.append(file_handler)
        except (OSError, IOError) as e:
            print(f"Warning: Could not create log file handler: {e}", file=sys.stderr)

    for handler in handlers:
        handler.setFormatter(logging.Formatter(LOG_FORMAT))

    logging.basicConfig(
        level=logging.DEBUG,
        format=LOG_FORMAT,
        handlers=handlers,
        force=True,
    )

    logger.info(f"{app_name} {__version__} starting...")
    if log_dir:
        logger.info(f"Log file: {log_dir / constants.LOG_FILE}")
