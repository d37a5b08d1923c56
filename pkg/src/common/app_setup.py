"""
Common application setup functionality

This module provides shared functionality for starting the tool,
including dependency checking, output directory initialization, and logging configuration.
"""

import sys
import logging
from pathlib import Path
from typing import Optional

from common.logging_config import setup_logging

logger = logging.getLogger(__name__)


def check_dependencies() -> bool:
    """Check if the numerical and IO dependencies are available"""
    missing_deps = []

    try:
        import numpy  # noqa: F401
    except ImportError:
        missing_deps.append("numpy")

    try:
        import scipy  # noqa: F401
    except ImportError:
        missing_deps.append("scipy")

    try:
        import yaml  # noqa: F401
    except ImportError:
        missing_deps.append("PyYAML")

    try:
        import lz4  # noqa: F401
    except ImportError:
        missing_deps.append("lz4")

    if missing_deps:
        print("Missing required dependencies:", file=sys.stderr)
        for dep in missing_deps:
            print(f"  - {dep}", file=sys.stderr)
        print("\nPlease install them using pip or your package manager", file=sys.stderr)
        return False

    return True


def prepare_output_dir(output_dir: Path) -> Path:
    """Create the output directory if needed"""
    output_dir.mkdir(parents=True, exist_ok=True)
    return output_dir


def initialize_run_environment(app_name: str, output_dir: Optional[Path], quiet: bool = False) -> None:
    """Initialize the run environment (output directory, logging)

    Args:
        app_name: Name of the application for logging messages
        output_dir: Directory receiving results and the log file, or None for console logging only
        quiet: Only show warnings and errors on the console
    """
    log_dir = None
    if output_dir is not None:
        try:
            log_dir = prepare_output_dir(output_dir)
        except OSError as e:
            print(f"Warning: Could not create output directory {output_dir}: {e}", file=sys.stderr)

    setup_logging(app_name, log_dir, quiet)
