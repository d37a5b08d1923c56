"""
Plot tables: raw, smoothed and 95% band columns per discourse for one keyword.
"""

import csv
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np

from common.errors import DataError
from config.constants import Z_95
from ingest.series import FrequencySeries, moving_windows, smooth_ma, window_bins
from ingest.series_io import format_value, slugify

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class PlotTable:
    keyword: str
    bin_starts: List[str]
    header: List[str]
    columns: List[np.ndarray]

    def column(self, name: str) -> np.ndarray:
        return self.columns[self.header.index(name) - 1]


def ci_half_widths(values: np.ndarray, window: int) -> np.ndarray:
    """1.96 times the standard error of the mean over each smoothing window"""
    half = np.zeros(len(values))
    for i, points in enumerate(moving_windows(values, window)):
        if len(points) > 1:
            half[i] = Z_95 * float(np.std(points, ddof=1)) / np.sqrt(len(points))
    return half


def plot_data(series: Sequence[FrequencySeries], window_years: float, window: Optional[int] = None) -> PlotTable:
    """
    Build the plot table of one keyword from its discourse series.

    The smoothing window is window_years converted to bins, unless a
    window in bins is given.

    Raises:
        DataError: If fewer than two series are given, they belong to different
            keywords, or their bin grids differ
    """
    if len(series) < 2:
        raise DataError(f"a plot table needs at least two series, got {len(series)}")
    first = series[0]
    for other in series[1:]:
        if other.keyword != first.keyword:
            raise DataError(f"plot series mix keywords '{first.keyword}' and '{other.keyword}'")
        if not first.same_grid(other):
            raise DataError(f"'{first.keyword}': series {first.label} and {other.label} have different bin grids")

    if window is None:
        window = window_bins(window_years, first.bin_width)
    header = ["bin_start"]
    columns: List[np.ndarray] = []
    for s in series:
        label = slugify(s.label)
        smoothed = smooth_ma(s, window)
        header += [f"{label}_raw", f"{label}_smoothed", f"{label}_ci95"]
        columns += [np.asarray(s.values), np.asarray(smoothed.values), ci_half_widths(s.values, window)]
    logger.debug(f"Plot table for '{first.keyword}' with a {window}-bin window")
    return PlotTable(first.keyword, [d.isoformat() for d in first.bin_starts()], header, columns)


def write_plot_table(table: PlotTable, path: Path) -> None:
    """Write a plot table as CSV, dates in the first column"""
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(table.header)
        for i, bin_start in enumerate(table.bin_starts):
            writer.writerow([bin_start] + [format_value(column[i]) for column in table.columns])
