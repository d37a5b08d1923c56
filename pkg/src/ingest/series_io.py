"""
CSV files for frequency series and plain value columns.
"""

import csv
import re
import logging
from pathlib import Path
from typing import List

import numpy as np

from common.errors import ConfigError, DataError
from ingest.documents import Discourse, parse_date
from ingest.series import FrequencySeries

logger = logging.getLogger(__name__)

SERIES_HEADER = ["bin_start", "value", "count"]


def slugify(name: str) -> str:
    """File-name safe version of a keyword or publication name"""
    slug = re.sub(r"[^\w]+", "_", name.strip().lower(), flags=re.UNICODE).strip("_")
    return slug or "unnamed"


def series_filename(series: FrequencySeries) -> str:
    return f"{slugify(series.keyword)}__{slugify(series.label)}.csv"


def format_value(value: float) -> str:
    """Shortest round-trip text for a float"""
    return repr(float(value))


def write_series_csv(series: FrequencySeries, path: Path) -> None:
    """Write a series as ``bin_start,value,count`` rows"""
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(SERIES_HEADER)
        for bin_start, value, count in zip(series.bin_starts(), series.values, series.counts):
            writer.writerow([bin_start.isoformat(), format_value(value), int(count)])


def read_series_csv(path: Path, keyword: str, discourse: Discourse) -> FrequencySeries:
    """
    Read a series written by write_series_csv.

    Raises:
        ConfigError: If the file does not exist
        DataError: On malformed rows or a non-contiguous bin grid
    """
    if not path.is_file():
        raise ConfigError(f"Series file not found: {path}")

    starts, values, counts = [], [], []
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.DictReader(f)
        if reader.fieldnames != SERIES_HEADER:
            raise DataError(f"{path}: expected header {','.join(SERIES_HEADER)}", 1)
        for row in reader:
            try:
                starts.append(parse_date(row["bin_start"]))
                values.append(float(row["value"]))
                counts.append(int(row["count"]))
            except (TypeError, ValueError) as e:
                raise DataError(f"{path}: {e}", reader.line_num)

    if len(starts) < 2:
        raise DataError(f"{path}: a series needs at least two bins")
    widths = {(b - a).days for a, b in zip(starts, starts[1:])}
    if len(widths) != 1:
        raise DataError(f"{path}: bins are not contiguous with a constant width")
    return FrequencySeries(keyword, discourse, starts[0], widths.pop(), np.array(values), np.array(counts))


def read_value_column(path: Path) -> np.ndarray:
    """
    Read a single series of numbers from a CSV file.

    Uses the ``value`` column when the file has a header naming one, else the
    first column. A non-numeric first row is treated as a header.
    """
    if not path.is_file():
        raise ConfigError(f"Series file not found: {path}")

    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.reader(f)
        rows = [(reader.line_num, row) for row in reader if row and any(cell.strip() for cell in row)]
    if not rows:
        raise DataError(f"{path}: file is empty")

    column = 0
    first = rows[0][1]
    try:
        float(first[0])
    except ValueError:
        header = [cell.strip() for cell in first]
        column = header.index("value") if "value" in header else 0
        rows = rows[1:]

    values: List[float] = []
    for line_num, row in rows:
        try:
            values.append(float(row[column]))
        except (IndexError, ValueError):
            raise DataError(f"{path}: not a number: {row}", line_num)

    array = np.array(values)
    if not np.all(np.isfinite(array)):
        raise DataError(f"{path}: series contains non-finite values")
    logger.debug(f"Read {len(array)} values from {path}")
    return array


def write_columns_csv(path: Path, header: List[str], columns: List[np.ndarray]) -> None:
    """Write parallel numeric columns with a header"""
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for row in zip(*columns):
            writer.writerow([format_value(v) for v in row])
