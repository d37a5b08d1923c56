#!/usr/bin/env python3
"""
Main entry point for the command line tool.

Dependencies are checked before the command modules, which import the
numerical stack, are loaded.
"""

import sys
from typing import List, Optional

from common.app_setup import check_dependencies
from common.errors import ExitStatus


def main(argv: Optional[List[str]] = None) -> int:
    """Main application entry point"""
    if not check_dependencies():
        return int(ExitStatus.USAGE)

    from cli import run
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
