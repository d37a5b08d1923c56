"""
Per-keyword analysis: AFA on both discourses, bidirectional Granger tests,
classification, tabulation and report emission.
"""

import logging
from concurrent.futures import Future, ThreadPoolExecutor, as_completed
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, TypeVar, Union

from analysis.afa import estimate_hurst
from analysis.granger import bidirectional
from analysis.stats import group_h_regression, one_sample_t, shapiro_wilk, summarize_correlations
from classify.report import SkippedKeyword, emit_report
from classify.taxonomy import BehaviorCell, TaxonomySummary, tabulate
from common.errors import DataError, NumericalError
from config.constants import NO_MEMORY_HURST
from config.run_config import RunConfig, dump_run_config
from ingest.documents import Discourse
from pipeline.ingest import Corpus, KeywordSeries, build_keyword_series, load_corpus
from pipeline.interface import AnalysisCallback, LoggingCallback

logger = logging.getLogger(__name__)

RUN_CONFIG_FILE = "run_config.yaml"

T = TypeVar('T')


@dataclass(frozen=True)
class AnalysisOutcome:
    cells: List[BehaviorCell]
    skipped: List[SkippedKeyword]
    summary: TaxonomySummary
    written: List[Path]


def analyze_keyword(entry: KeywordSeries, config: RunConfig) -> BehaviorCell:
    """
    Classify one keyword.

    Raises:
        NumericalError: If a series is degenerate for AFA or the Granger tests
    """
    afa_articles = estimate_hurst(entry.articles.values, config.afa)
    afa_ads = estimate_hurst(entry.ads.values, config.afa)
    granger = bidirectional(entry.ads.values, entry.articles.values, config.granger)
    return BehaviorCell.from_results(entry.keyword, afa_articles, afa_ads, granger, config.alpha)


def analyze_all(series: Sequence[KeywordSeries], config: RunConfig,
                callback: Optional[AnalysisCallback] = None) -> Tuple[List[BehaviorCell], List[SkippedKeyword]]:
    """
    Analyse every keyword on a bounded worker pool.

    Results come back in keyword order whatever the completion order.
    """
    callback = callback or LoggingCallback()
    total = len(series)
    outcomes: List[Union[BehaviorCell, SkippedKeyword, None]] = [None] * total

    with ThreadPoolExecutor(max_workers=config.workers) as pool:
        futures: Dict[Future[BehaviorCell], int] = {
            pool.submit(analyze_keyword, entry, config): i for i, entry in enumerate(series)
        }
        for done, future in enumerate(as_completed(futures), start=1):
            i = futures[future]
            try:
                cell = future.result()
            except NumericalError as e:
                skipped = SkippedKeyword(series[i].keyword, str(e))
                outcomes[i] = skipped
                callback.on_keyword_skipped(skipped.keyword, skipped.reason, done, total)
                continue
            outcomes[i] = cell
            callback.on_keyword_done(cell, done, total)

    cells = [o for o in outcomes if isinstance(o, BehaviorCell)]
    skipped_keywords = [o for o in outcomes if isinstance(o, SkippedKeyword)]
    return cells, skipped_keywords


def _guarded(name: str, compute: Callable[[], T]) -> Optional[T]:
    try:
        return compute()
    except (DataError, NumericalError) as e:
        logger.info(f"No {name}: {e}")
        return None


def correlation_summaries(series: Sequence[KeywordSeries], alpha: float) -> Dict[str, Any]:
    """Correlation summaries between advertisements, articles and each article source"""
    pairs: Dict[str, List[Tuple[str, Any, Any]]] = {
        'ads~articles': [(s.keyword, s.ads.values, s.articles.values) for s in series],
    }
    sources = sorted(series[0].by_source) if series else []
    for source in sources:
        pairs[f"ads~{source}"] = [(s.keyword, s.ads.values, s.by_source[source].values) for s in series]
    for a, b in combinations(sources, 2):
        pairs[f"{a}~{b}"] = [(s.keyword, s.by_source[a].values, s.by_source[b].values) for s in series]

    result: Dict[str, Any] = {}
    for name, pair_list in pairs.items():
        summary = summarize_correlations(pair_list, alpha)
        result[name] = summary.to_dict() if summary else None
    return result


def hurst_tests(cells: Sequence[BehaviorCell]) -> Dict[str, Any]:
    """Tests of the Hurst exponents against the no-memory baseline, for normality and by discourse"""
    h_articles = [cell.h_articles for cell in cells]
    h_ads = [cell.h_ads for cell in cells]
    tests: Dict[str, Any] = {}
    for name, values in (('articles', h_articles), ('ads', h_ads)):
        t_test = _guarded(f"t-test for {name}", lambda: one_sample_t(values, NO_MEMORY_HURST))
        normality = _guarded(f"Shapiro-Wilk test for {name}", lambda: shapiro_wilk(values))
        tests[name] = {
            't_vs_no_memory': t_test._asdict() if t_test else None,
            'shapiro_wilk': normality._asdict() if normality else None,
        }
    groups = [Discourse.ARTICLE] * len(h_articles) + [Discourse.ADVERTISEMENT] * len(h_ads)
    regression = _guarded("group regression", lambda: group_h_regression(h_articles + h_ads, groups))
    tests['group_regression'] = regression.to_dict() if regression else None
    return tests


def run_analysis(config: RunConfig, corpus: Optional[Corpus] = None,
                 callback: Optional[AnalysisCallback] = None) -> AnalysisOutcome:
    """
    Analyse the configured corpus and write the reports.

    Raises:
        ConfigError: If the corpus or keyword list is missing or empty
        DataError: On malformed input
        NumericalError: If every keyword had to be skipped
    """
    corpus = corpus or load_corpus(config)
    series = build_keyword_series(corpus, config.analysis_bin_width, config.start_date, config.end_date,
                                  config.aggregation)
    cells, skipped = analyze_all(series, config, callback)
    if not cells:
        raise NumericalError(f"All {len(skipped)} keywords were skipped as degenerate")

    analysed = {cell.keyword for cell in cells}
    summary = tabulate(cells).with_extras(
        correlations=correlation_summaries([s for s in series if s.keyword in analysed], config.alpha),
        h_tests=hurst_tests(cells),
        alpha=config.alpha,
        bin_width_days=config.analysis_bin_width,
    )

    output_dir = config.output_dir
    output_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for fmt in config.report_formats:
        written += emit_report(summary, cells, fmt, output_dir, skipped)
    config_path = output_dir / RUN_CONFIG_FILE
    config_path.write_text(dump_run_config(config), encoding="utf-8")
    written.append(config_path)

    logger.info(f"Analysed {len(cells)} keywords, skipped {len(skipped)}")
    return AnalysisOutcome(cells, skipped, summary, written)
