"""
Run configuration: a YAML file with sections, overridable key by key from the command line.

    corpus:   path, keywords, start_date, end_date
    series:   bin_width_days, smoothing_window_bins, smoothing_window_years, aggregation
    analysis: alpha, bin_width_days
    afa:      poly_order, window_sizes, fit_range
    granger:  max_lag, lag_selection, fixed_lag
    run:      seed, output_dir, workers, report_formats

Every setting is addressed as ``section.key``. Relative paths in a file
resolve against the file's directory; paths given on the command line
resolve against the working directory.
"""

import logging
from dataclasses import dataclass, field
from datetime import date
from pathlib import Path
from typing import Any, Callable, Dict, Optional, Tuple

import yaml

from analysis.afa import AfaConfig
from analysis.granger import GrangerConfig, LagSelection
from classify.report import ReportFormat
from common.errors import ConfigError
from config.constants import (
    DEFAULT_ALPHA,
    DEFAULT_BIN_WIDTH_DAYS,
    DEFAULT_MAX_LAG,
    DEFAULT_OUTPUT_DIR,
    DEFAULT_POLY_ORDER,
    DEFAULT_SEED,
    DEFAULT_SMOOTHING_WINDOW_YEARS,
    DEFAULT_WORKERS,
)
from ingest.documents import parse_date
from ingest.series import Aggregation, window_bins

logger = logging.getLogger(__name__)


def _positive_int(value: Any) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise ValueError(f"expected a positive integer, got {value!r}")
    number = int(value)
    if number < 1:
        raise ValueError(f"expected a positive integer, got {value!r}")
    return number


def _non_negative_int(value: Any) -> int:
    if isinstance(value, bool):
        raise ValueError(f"expected a non-negative integer, got {value!r}")
    number = int(value)
    if number < 0:
        raise ValueError(f"expected a non-negative integer, got {value!r}")
    return number


def _positive_float(value: Any) -> float:
    number = float(value)
    if not number > 0.0:
        raise ValueError(f"expected a positive number, got {value!r}")
    return number


def _probability(value: Any) -> float:
    number = float(value)
    if not 0.0 < number < 1.0:
        raise ValueError(f"expected a value in (0, 1), got {value!r}")
    return number


def _date(value: Any) -> date:
    if isinstance(value, date):
        return value
    return parse_date(str(value))


def _path(value: Any) -> Path:
    if not isinstance(value, (str, Path)) or not str(value):
        raise ValueError(f"expected a path, got {value!r}")
    return Path(value)


def _int_list(value: Any) -> Tuple[int, ...]:
    if isinstance(value, str):
        value = [part for part in value.replace(",", " ").split()]
    return tuple(_positive_int(v) for v in value)


def _range(value: Any) -> Tuple[int, int]:
    if isinstance(value, str):
        value = value.replace(",", " ").split()
    bounds = tuple(int(v) for v in value)
    if len(bounds) != 2:
        raise ValueError(f"expected [start, stop], got {value!r}")
    return bounds[0], bounds[1]


def _formats(value: Any) -> Tuple[ReportFormat, ...]:
    if isinstance(value, str):
        value = value.replace(",", " ").split()
    formats = tuple(ReportFormat(str(v).lower()) for v in value)
    if not formats:
        raise ValueError("at least one report format is required")
    return formats


# section -> key -> parser
SCHEMA: Dict[str, Dict[str, Callable[[Any], Any]]] = {
    'corpus': {'path': _path, 'keywords': _path, 'start_date': _date, 'end_date': _date},
    'series': {
        'bin_width_days': _positive_int,
        'smoothing_window_bins': _positive_int,
        'smoothing_window_years': _positive_float,
        'aggregation': lambda v: Aggregation(str(v).lower()),
    },
    'analysis': {'alpha': _probability, 'bin_width_days': _positive_int},
    'afa': {'poly_order': _positive_int, 'window_sizes': _int_list, 'fit_range': _range},
    'granger': {
        'max_lag': _positive_int,
        'lag_selection': lambda v: LagSelection(str(v).lower()),
        'fixed_lag': _positive_int,
    },
    'run': {
        'seed': _non_negative_int,
        'output_dir': _path,
        'workers': _positive_int,
        'report_formats': _formats,
    },
}

PATH_KEYS = ('corpus.path', 'corpus.keywords', 'run.output_dir')


def parse_setting(name: str, value: Any) -> Any:
    """
    Validate and convert one ``section.key`` setting.

    Raises:
        ConfigError: For an unknown name or an invalid value
    """
    section, _, key = name.partition(".")
    parser = SCHEMA.get(section, {}).get(key)
    if parser is None:
        raise ConfigError(f"Unknown configuration key '{name}'")
    if value is None:
        return None
    try:
        return parser(value)
    except (TypeError, ValueError) as e:
        raise ConfigError(f"Invalid value for '{name}': {e}")


def flatten_settings(document: Any, base_dir: Optional[Path] = None) -> Dict[str, Any]:
    """Parse a loaded YAML document into ``section.key`` settings"""
    if document is None:
        return {}
    if not isinstance(document, dict):
        raise ConfigError("Configuration file must contain sections of key: value pairs")
    settings: Dict[str, Any] = {}
    for section, entries in document.items():
        if section not in SCHEMA:
            raise ConfigError(f"Unknown configuration section '{section}'")
        if entries is None:
            continue
        if not isinstance(entries, dict):
            raise ConfigError(f"Section '{section}' must contain key: value pairs")
        for key, value in entries.items():
            name = f"{section}.{key}"
            parsed = parse_setting(name, value)
            if name in PATH_KEYS and parsed is not None and base_dir is not None and not parsed.is_absolute():
                parsed = base_dir / parsed
            settings[name] = parsed
    return settings


@dataclass(frozen=True)
class RunConfig:
    """Everything a run needs, with documented defaults"""
    corpus_path: Optional[Path] = None
    keywords_path: Optional[Path] = None
    start_date: Optional[date] = None
    end_date: Optional[date] = None
    bin_width_days: int = DEFAULT_BIN_WIDTH_DAYS
    smoothing_window_bins: Optional[int] = None
    smoothing_window_years: float = DEFAULT_SMOOTHING_WINDOW_YEARS
    aggregation: Aggregation = Aggregation.PER_DOC_MEAN
    alpha: float = DEFAULT_ALPHA
    analysis_bin_width_days: Optional[int] = None
    afa: AfaConfig = field(default_factory=AfaConfig)
    granger: GrangerConfig = field(default_factory=GrangerConfig)
    seed: int = DEFAULT_SEED
    output_dir: Path = Path(DEFAULT_OUTPUT_DIR)
    workers: int = DEFAULT_WORKERS
    report_formats: Tuple[ReportFormat, ...] = (ReportFormat.CSV, ReportFormat.JSON)

    def __post_init__(self) -> None:
        if self.start_date and self.end_date and self.end_date < self.start_date:
            raise ConfigError(f"end_date {self.end_date} precedes start_date {self.start_date}")

    @property
    def smoothing_bins(self) -> int:
        """Smoothing window in bins of bin_width_days"""
        if self.smoothing_window_bins is not None:
            return self.smoothing_window_bins
        return window_bins(self.smoothing_window_years, self.bin_width_days)

    @property
    def analysis_bin_width(self) -> int:
        """Bin width of the series fed to AFA and the Granger tests"""
        return self.analysis_bin_width_days or self.bin_width_days

    def require_corpus(self) -> Tuple[Path, Path]:
        """
        Corpus and keyword paths, checked to exist.

        Raises:
            ConfigError: If either is unset or missing
        """
        if self.corpus_path is None:
            raise ConfigError("No corpus configured (corpus.path or --corpus)")
        if self.keywords_path is None:
            raise ConfigError("No keyword list configured (corpus.keywords or --keywords)")
        for path in (self.corpus_path, self.keywords_path):
            if not path.is_file():
                raise ConfigError(f"File not found: {path}")
        return self.corpus_path, self.keywords_path

    @classmethod
    def from_settings(cls, settings: Dict[str, Any]) -> 'RunConfig':
        """Build a configuration from ``section.key`` settings, defaults for the rest"""
        def get(name: str, default: Any) -> Any:
            value = settings.get(name)
            return default if value is None else value

        alpha = get('analysis.alpha', DEFAULT_ALPHA)
        fixed_lag = settings.get('granger.fixed_lag')
        selection = get('granger.lag_selection', LagSelection.FIXED if fixed_lag else LagSelection.BIC)
        try:
            afa = AfaConfig(
                poly_order=get('afa.poly_order', DEFAULT_POLY_ORDER),
                window_sizes=settings.get('afa.window_sizes'),
                fit_range=settings.get('afa.fit_range'),
            )
            granger = GrangerConfig(
                max_lag=get('granger.max_lag', DEFAULT_MAX_LAG),
                lag_selection=selection,
                fixed_lag=fixed_lag,
                alpha=alpha,
            )
        except ConfigError as e:
            raise ConfigError(f"Invalid configuration: {e}")

        return cls(
            corpus_path=settings.get('corpus.path'),
            keywords_path=settings.get('corpus.keywords'),
            start_date=settings.get('corpus.start_date'),
            end_date=settings.get('corpus.end_date'),
            bin_width_days=get('series.bin_width_days', DEFAULT_BIN_WIDTH_DAYS),
            smoothing_window_bins=settings.get('series.smoothing_window_bins'),
            smoothing_window_years=get('series.smoothing_window_years', DEFAULT_SMOOTHING_WINDOW_YEARS),
            aggregation=get('series.aggregation', Aggregation.PER_DOC_MEAN),
            alpha=alpha,
            analysis_bin_width_days=settings.get('analysis.bin_width_days'),
            afa=afa,
            granger=granger,
            seed=get('run.seed', DEFAULT_SEED),
            output_dir=get('run.output_dir', Path(DEFAULT_OUTPUT_DIR)),
            workers=get('run.workers', DEFAULT_WORKERS),
            report_formats=get('run.report_formats', (ReportFormat.CSV, ReportFormat.JSON)),
        )


def read_config_file(path: Path) -> Dict[str, Any]:
    """
    Load the ``section.key`` settings of a YAML configuration file.

    Raises:
        ConfigError: If the file is missing, not valid YAML or has unknown keys
    """
    if not path.is_file():
        raise ConfigError(f"Configuration file not found: {path}")
    try:
        with open(path, 'r', encoding='utf-8') as f:
            document = yaml.safe_load(f)
    except yaml.YAMLError as e:
        raise ConfigError(f"Cannot parse configuration file {path}: {e}")
    settings = flatten_settings(document, path.resolve().parent)
    logger.info(f"Loaded configuration from {path}")
    return settings


def load_run_config(path: Optional[Path] = None, overrides: Optional[Dict[str, Any]] = None) -> RunConfig:
    """
    Combine a configuration file (optional) with command line overrides.

    Overrides are ``section.key`` settings; ``None`` values leave the file value in place.
    """
    settings = read_config_file(path) if path is not None else {}
    for name, value in (overrides or {}).items():
        if value is not None:
            settings[name] = parse_setting(name, value)
    return RunConfig.from_settings(settings)


def dump_run_config(config: RunConfig) -> str:
    """YAML text of a configuration, in the file layout"""
    document = {
        'corpus': {
            'path': str(config.corpus_path) if config.corpus_path else None,
            'keywords': str(config.keywords_path) if config.keywords_path else None,
            'start_date': config.start_date.isoformat() if config.start_date else None,
            'end_date': config.end_date.isoformat() if config.end_date else None,
        },
        'series': {
            'bin_width_days': config.bin_width_days,
            'smoothing_window_bins': config.smoothing_window_bins,
            'smoothing_window_years': config.smoothing_window_years,
            'aggregation': config.aggregation.value,
        },
        'analysis': {'alpha': config.alpha, 'bin_width_days': config.analysis_bin_width_days},
        'afa': {
            'poly_order': config.afa.poly_order,
            'window_sizes': list(config.afa.window_sizes) if config.afa.window_sizes else None,
            'fit_range': list(config.afa.fit_range) if config.afa.fit_range else None,
        },
        'granger': {
            'max_lag': config.granger.max_lag,
            'lag_selection': config.granger.lag_selection.value,
            'fixed_lag': config.granger.fixed_lag,
        },
        'run': {
            'seed': config.seed,
            'output_dir': str(config.output_dir),
            'workers': config.workers,
            'report_formats': [fmt.value for fmt in config.report_formats],
        },
    }
    return yaml.safe_dump(document, indent=2, default_flow_style=False, sort_keys=False)
