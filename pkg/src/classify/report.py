"""
Report files: per-keyword CSV/JSON rows and the summary JSON.

Floats are written with 6 significant digits and JSON keys are sorted,
so identical inputs give byte-identical files.
"""

import csv
import logging
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Sequence

from classify.taxonomy import BehaviorCell, TaxonomySummary
from common.errors import ConfigError, DataError
from common.json_codec import write_json
from config.constants import REPORT_CSV_FILE, REPORT_JSON_FILE, SUMMARY_JSON_FILE

logger = logging.getLogger(__name__)

REPORT_HEADER = [
    "keyword", "h_art", "h_art_se", "h_ads", "h_ads_se", "p_ads_to_art", "p_art_to_ads",
    "lag", "causal_class", "persist_art", "persist_ads", "status",
]

STATUS_OK = "ok"
STATUS_SKIPPED = "skipped"


class ReportFormat(Enum):
    CSV = "csv"
    JSON = "json"


@dataclass(frozen=True)
class SkippedKeyword:
    keyword: str
    reason: str


def format_float(value: float) -> str:
    return format(value, ".6g")


def round_float(value: float) -> float:
    """A float rounded to the precision written in reports"""
    return float(format_float(value))


def round_floats(document: Any) -> Any:
    """Round every float in a JSON-ready structure to 6 significant digits"""
    if isinstance(document, bool):
        return document
    if isinstance(document, float):
        return round_float(document)
    if isinstance(document, dict):
        return {key: round_floats(value) for key, value in document.items()}
    if isinstance(document, (list, tuple)):
        return [round_floats(value) for value in document]
    return document


def cell_row(cell: BehaviorCell) -> Dict[str, Any]:
    return {
        'keyword': cell.keyword,
        'h_art': round_float(cell.h_articles),
        'h_art_se': round_float(cell.h_articles_se),
        'h_ads': round_float(cell.h_ads),
        'h_ads_se': round_float(cell.h_ads_se),
        'p_ads_to_art': round_float(cell.granger.p_xy),
        'p_art_to_ads': round_float(cell.granger.p_yx),
        'lag': cell.granger.lag,
        'causal_class': cell.causal.value,
        'persist_art': cell.persistence_articles.value,
        'persist_ads': cell.persistence_ads.value,
        'status': STATUS_OK,
    }


def skipped_row(skipped: SkippedKeyword) -> Dict[str, Any]:
    row: Dict[str, Any] = {name: None for name in REPORT_HEADER}
    row.update(keyword=skipped.keyword, status=STATUS_SKIPPED)
    return row


def report_rows(cells: Sequence[BehaviorCell], skipped: Sequence[SkippedKeyword] = ()) -> List[Dict[str, Any]]:
    """Report rows for analysed and skipped keywords, ordered by keyword"""
    rows = [cell_row(cell) for cell in cells] + [skipped_row(s) for s in skipped]
    return sorted(rows, key=lambda row: row['keyword'])


def _csv_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return format_float(value)
    return str(value)


def write_report_csv(path: Path, rows: Sequence[Dict[str, Any]]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(REPORT_HEADER)
        for row in rows:
            writer.writerow([_csv_cell(row[name]) for name in REPORT_HEADER])


def emit_report(summary: TaxonomySummary, cells: Sequence[BehaviorCell], fmt: ReportFormat,
                output_dir: Path, skipped: Sequence[SkippedKeyword] = ()) -> List[Path]:
    """
    Write the report in one format.

    CSV writes report.csv; JSON writes report.json and summary.json.

    Raises:
        DataError: If there are no analysed keywords
        ConfigError: If the destination cannot be written
    """
    if not cells:
        raise DataError("no analysed keywords to report")

    rows = report_rows(cells, skipped)
    try:
        output_dir.mkdir(parents=True, exist_ok=True)
        if fmt is ReportFormat.CSV:
            path = output_dir / REPORT_CSV_FILE
            write_report_csv(path, rows)
            written = [path]
        else:
            report_path = output_dir / REPORT_JSON_FILE
            summary_path = output_dir / SUMMARY_JSON_FILE
            write_json(report_path, {'keywords': rows})
            summary_document = summary.to_dict()
            summary_document['skipped'] = [{'keyword': s.keyword, 'reason': s.reason}
                                           for s in sorted(skipped, key=lambda s: s.keyword)]
            write_json(summary_path, round_floats(summary_document))
            written = [report_path, summary_path]
    except OSError as e:
        raise ConfigError(f"Cannot write report to {output_dir}: {e}")

    for path in written:
        logger.info(f"Wrote {path}")
    return written

