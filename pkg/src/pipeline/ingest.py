"""
Corpus to series: load documents and keywords, build every keyword's series on one grid.
"""

import logging
from dataclasses import dataclass, field
from datetime import date
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from common.errors import ConfigError
from config.constants import SERIES_DIR
from config.run_config import RunConfig
from ingest.documents import Discourse, Document, read_corpus
from ingest.keywords import KeywordSpec, read_keywords
from ingest.series import Aggregation, FrequencySeries, build_series, corpus_range
from ingest.series_io import series_filename, write_series_csv

logger = logging.getLogger(__name__)

SOURCES_DIR = "sources"


@dataclass(frozen=True)
class KeywordSeries:
    """Series of one keyword: pooled articles, advertisements and articles per source"""
    keyword: str
    articles: FrequencySeries
    ads: FrequencySeries
    by_source: Dict[str, FrequencySeries] = field(default_factory=dict)


@dataclass(frozen=True)
class Corpus:
    documents: List[Document]
    keywords: List[KeywordSpec]

    def article_sources(self) -> List[str]:
        return sorted({doc.source for doc in self.documents if doc.discourse is Discourse.ARTICLE})

    def counts(self) -> Dict[str, int]:
        return {d.value: sum(1 for doc in self.documents if doc.discourse is d) for d in Discourse}


def load_corpus(config: RunConfig) -> Corpus:
    """
    Read the configured corpus and keyword list.

    Raises:
        ConfigError: If a path is missing or the keyword list is empty
        DataError: On malformed input
    """
    corpus_path, keywords_path = config.require_corpus()
    keywords = read_keywords(keywords_path)
    if not keywords:
        raise ConfigError(f"Keyword list {keywords_path} is empty")
    documents = read_corpus(corpus_path, config.start_date, config.end_date)
    return Corpus(documents, keywords)


def grid_bounds(documents: Sequence[Document], start: Optional[date], end: Optional[date]) -> Tuple[date, date]:
    """Configured range, falling back to the earliest and latest document"""
    first, last = corpus_range(documents)
    return start or first, end or last


def build_keyword_series(corpus: Corpus, bin_width: int, start: Optional[date] = None,
                         end: Optional[date] = None,
                         aggregation: Aggregation = Aggregation.PER_DOC_MEAN) -> List[KeywordSeries]:
    """Series for every keyword in keyword-list order, all on one bin grid"""
    start, end = grid_bounds(corpus.documents, start, end)
    sources = corpus.article_sources()
    result = []
    for spec in corpus.keywords:
        def series_for(discourse: Discourse, source: Optional[str] = None) -> FrequencySeries:
            return build_series(corpus.documents, spec, discourse, bin_width, start, end, source, aggregation)

        by_source = {source: series_for(Discourse.ARTICLE, source) for source in sources} if len(sources) > 1 else {}
        result.append(KeywordSeries(
            keyword=spec.canonical,
            articles=series_for(Discourse.ARTICLE),
            ads=series_for(Discourse.ADVERTISEMENT),
            by_source=by_source,
        ))
    logger.info(f"Built series for {len(result)} keywords, {len(result[0].articles) if result else 0} bins "
                f"of {bin_width} days from {start}")
    return result


def write_keyword_series(series: Sequence[KeywordSeries], output_dir: Path) -> List[Path]:
    """Write discourse series to series/ and per-source article series to series/sources/"""
    series_dir = output_dir / SERIES_DIR
    sources_dir = series_dir / SOURCES_DIR
    written = []
    for entry in series:
        targets = [(series_dir, entry.articles), (series_dir, entry.ads)]
        targets += [(sources_dir, s) for s in entry.by_source.values()]
        for directory, s in targets:
            directory.mkdir(parents=True, exist_ok=True)
            path = directory / series_filename(s)
            write_series_csv(s, path)
            written.append(path)
    return written


def run_ingest(config: RunConfig) -> Tuple[Corpus, List[KeywordSeries], List[Path]]:
    """Load the corpus, build all series at the presentation bin width and write them"""
    corpus = load_corpus(config)
    series = build_keyword_series(corpus, config.bin_width_days, config.start_date, config.end_date,
                                  config.aggregation)
    written = write_keyword_series(series, config.output_dir)
    logger.info(f"Wrote {len(written)} series files to {config.output_dir / SERIES_DIR}")
    return corpus, series, written
