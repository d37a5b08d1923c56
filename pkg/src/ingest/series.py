"""
Keyword frequency series: binning documents into a regular grid and smoothing.
"""

import math
import logging
from dataclasses import dataclass, field
from datetime import date, timedelta
from enum import Enum
from typing import Iterable, List, Optional

import numpy as np

from common.errors import ConfigError, DataError, EmptyDiscourseError
from config.constants import DAYS_PER_YEAR
from ingest.documents import Discourse, Document
from ingest.keywords import KeywordSpec, doc_relative_frequency

logger = logging.getLogger(__name__)


class Aggregation(Enum):
    """How per-document frequencies combine into a bin value"""
    PER_DOC_MEAN = "per_doc_mean"  # mean of per-document ratios
    POOLED = "pooled"  # total matches / total tokens


@dataclass(frozen=True, eq=False)
class FrequencySeries:
    """Regularly sampled relative frequency of one keyword in one discourse"""
    keyword: str
    discourse: Discourse
    start: date
    bin_width: int
    values: np.ndarray
    counts: np.ndarray
    source: Optional[str] = field(default=None)

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=float)
        counts = np.asarray(self.counts, dtype=np.int64)
        if values.ndim != 1 or counts.ndim != 1 or len(values) != len(counts):
            raise DataError(f"series '{self.keyword}': values and counts must be parallel sequences")
        if len(values) < 2:
            raise DataError(f"series '{self.keyword}' needs at least two bins, got {len(values)}")
        if not np.all(np.isfinite(values)) or np.any(values < 0):
            raise DataError(f"series '{self.keyword}' has negative or non-finite values")
        if self.bin_width < 1:
            raise DataError(f"series '{self.keyword}' has bin width {self.bin_width} < 1 day")
        values.setflags(write=False)
        counts.setflags(write=False)
        object.__setattr__(self, 'values', values)
        object.__setattr__(self, 'counts', counts)

    def __len__(self) -> int:
        return len(self.values)

    @property
    def label(self) -> str:
        """Discourse label, or the publication name for a single-source series"""
        return self.source if self.source else self.discourse.value

    def bin_starts(self) -> List[date]:
        return [self.start + timedelta(days=i * self.bin_width) for i in range(len(self))]

    def same_grid(self, other: 'FrequencySeries') -> bool:
        return self.start == other.start and self.bin_width == other.bin_width and len(self) == len(other)

    def with_values(self, values: np.ndarray) -> 'FrequencySeries':
        return FrequencySeries(self.keyword, self.discourse, self.start, self.bin_width,
                               values, self.counts, self.source)


def corpus_range(docs: Iterable[Document]) -> tuple[date, date]:
    """Earliest and latest document date"""
    dates = [doc.date for doc in docs]
    if not dates:
        raise EmptyDiscourseError("corpus contains no documents")
    return min(dates), max(dates)


def build_series(docs: Iterable[Document], spec: KeywordSpec, discourse: Discourse, bin_width: int,
                 start: Optional[date] = None, end: Optional[date] = None,
                 source: Optional[str] = None,
                 aggregation: Aggregation = Aggregation.PER_DOC_MEAN) -> FrequencySeries:
    """
    Build the binned relative frequency series of a keyword for one discourse.

    The bin grid runs from ``start`` to ``end``; when omitted they are taken
    from the whole document stream (all discourses) so that the series of
    both discourses share one grid. Bins without documents get value 0.

    Raises:
        ConfigError: If bin_width < 1
        EmptyDiscourseError: If no documents remain after filtering
        DataError: If a document falls outside the grid or the grid has fewer than two bins
    """
    if bin_width < 1:
        raise ConfigError(f"bin width must be at least 1 day, got {bin_width}")

    docs = list(docs)
    if start is None or end is None:
        first, last = corpus_range(docs)
        start = first if start is None else start
        end = last if end is None else end

    selected = [doc for doc in docs
                if doc.discourse is discourse and (source is None or doc.source == source)]
    if not selected:
        what = f"{discourse.value} documents" + (f" from '{source}'" if source else "")
        raise EmptyDiscourseError(f"no {what} in corpus")

    n_bins = (end - start).days // bin_width + 1
    if n_bins < 2:
        raise DataError(f"corpus range {start}..{end} spans fewer than two bins of {bin_width} days")

    per_bin: List[List[float]] = [[] for _ in range(n_bins)]
    matches = np.zeros(n_bins, dtype=np.int64)
    tokens = np.zeros(n_bins, dtype=np.int64)
    degenerate = 0
    for doc in selected:
        if doc.date < start or doc.date > end:
            raise DataError(f"document {doc.id} dated {doc.date} lies outside {start}..{end}")
        freq = doc_relative_frequency(doc, spec)
        if freq is None:
            degenerate += 1
            continue
        b = (doc.date - start).days // bin_width
        per_bin[b].append(freq)
        matches[b] += spec.count_in(doc)
        tokens[b] += len(doc.tokens)

    if degenerate:
        logger.info(f"{spec.canonical}/{discourse.value}: skipped {degenerate} documents without tokens")

    counts = np.array([len(freqs) for freqs in per_bin], dtype=np.int64)
    values = np.zeros(n_bins)
    for b, freqs in enumerate(per_bin):
        if not freqs:
            continue
        if aggregation is Aggregation.POOLED:
            values[b] = matches[b] / tokens[b]
        else:
            # fsum keeps the bin value independent of document order
            values[b] = math.fsum(freqs) / len(freqs)

    return FrequencySeries(spec.canonical, discourse, start, bin_width, values, counts, source)


def _window_bounds(n: int, window: int, wrap: bool) -> tuple[np.ndarray, np.ndarray]:
    left = (window - 1) // 2
    right = window // 2
    idx = np.arange(n)
    if wrap:
        return idx - left, idx + right + 1
    return np.maximum(idx - left, 0), np.minimum(idx + right + 1, n)


def moving_windows(values: np.ndarray, window: int, wrap: bool = False) -> List[np.ndarray]:
    """The centred window of values around every position"""
    n = len(values)
    lo, hi = _window_bounds(n, window, wrap)
    if wrap:
        return [values[np.arange(a, b) % n] for a, b in zip(lo, hi)]
    return [values[a:b] for a, b in zip(lo, hi)]


def smooth_ma(series: FrequencySeries, window: int, wrap: bool = False) -> FrequencySeries:
    """
    Centred simple moving average.

    Edges average over the available points (truncated window) unless
    ``wrap`` is set, in which case the series is treated as periodic.
    The output has the input's length and counts.

    Raises:
        ConfigError: If window < 1 or window > series length
    """
    n = len(series)
    if window < 1 or window > n:
        raise ConfigError(f"smoothing window must be between 1 and {n} bins, got {window}")
    if window == 1:
        return series.with_values(series.values.copy())

    values = series.values
    if wrap:
        smoothed = np.array([w.mean() for w in moving_windows(values, window, wrap=True)])
    else:
        cumulative = np.concatenate(([0.0], np.cumsum(values)))
        lo, hi = _window_bounds(n, window, wrap=False)
        smoothed = (cumulative[hi] - cumulative[lo]) / (hi - lo)
    # cumulative differences can leave -0.0 or tiny negatives around zero runs
    return series.with_values(np.clip(smoothed, 0.0, None))


def window_bins(years: float, bin_width_days: int) -> int:
    """Convert a smoothing window in years to a whole number of bins"""
    return max(1, math.floor(years * DAYS_PER_YEAR / bin_width_days + 0.5))
