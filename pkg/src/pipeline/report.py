"""
Plot tables for every keyword, from series at the presentation bin width.
"""

import logging
from pathlib import Path
from typing import List, Optional

from classify.plot_data import plot_data, write_plot_table
from config.constants import PLOTS_DIR
from config.run_config import RunConfig
from ingest.series_io import slugify
from pipeline.ingest import Corpus, build_keyword_series, load_corpus

logger = logging.getLogger(__name__)


def run_report(config: RunConfig, corpus: Optional[Corpus] = None) -> List[Path]:
    """Write plots/<keyword>.csv with raw, smoothed and band columns per discourse and article source"""
    corpus = corpus or load_corpus(config)
    series = build_keyword_series(corpus, config.bin_width_days, config.start_date, config.end_date,
                                  config.aggregation)
    plots_dir = config.output_dir / PLOTS_DIR
    plots_dir.mkdir(parents=True, exist_ok=True)

    written = []
    for entry in series:
        panel = [entry.articles, entry.ads] + [entry.by_source[s] for s in sorted(entry.by_source)]
        table = plot_data(panel, config.smoothing_window_years, config.smoothing_bins)
        path = plots_dir / f"{slugify(entry.keyword)}.csv"
        write_plot_table(table, path)
        written.append(path)
    logger.info(f"Wrote {len(written)} plot tables to {plots_dir}")
    return written
