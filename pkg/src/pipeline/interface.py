"""
Interface for receiving progress from a per-keyword analysis run.
"""

import logging
from typing import Protocol, runtime_checkable

from classify.taxonomy import BehaviorCell

logger = logging.getLogger(__name__)


@runtime_checkable
class AnalysisCallback(Protocol):
    """Receives one call per keyword as the worker pool finishes it"""

    def on_keyword_done(self, cell: BehaviorCell, done: int, total: int) -> None:
        """Handle a classified keyword.

        Args:
            cell: The keyword's taxonomy cell
            done: Keywords finished so far, this one included
            total: Keywords in the run
        """
        ...

    def on_keyword_skipped(self, keyword: str, reason: str, done: int, total: int) -> None:
        """Handle a keyword whose series could not be analysed.

        Args:
            keyword: Canonical keyword
            reason: Error message of the degenerate series
            done: Keywords finished so far, this one included
            total: Keywords in the run
        """
        ...


class LoggingCallback:
    """Reports progress through the module logger"""

    def on_keyword_done(self, cell: BehaviorCell, done: int, total: int) -> None:
        logger.info(f"[{done}/{total}] {cell.keyword}: {cell.causal.value}, "
                    f"H art={cell.h_articles:.3f} ads={cell.h_ads:.3f}, lag {cell.granger.lag}")

    def on_keyword_skipped(self, keyword: str, reason: str, done: int, total: int) -> None:
        logger.warning(f"[{done}/{total}] Skipping '{keyword}': {reason}")
