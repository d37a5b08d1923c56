"""
Corpus documents: the document model, tokenization and the JSONL corpus reader.

A corpus file holds one JSON object per line with the fields
``id``, ``date`` (``YYYY-MM-DD``), ``type`` (``article`` or ``advertisement``),
``source`` and ``text``. Files ending in ``.lz4`` are read as LZ4 frames.
"""

import json
import re
import logging
from collections import Counter
from dataclasses import dataclass
from datetime import date, datetime
from enum import Enum
from functools import cached_property
from pathlib import Path
from typing import IO, Any, Dict, Iterable, List, Optional

import lz4.frame

from common.errors import ConfigError, DataError

logger = logging.getLogger(__name__)

# Maximal runs of Unicode letters; digits, underscores and punctuation separate tokens
_TOKEN_RE = re.compile(r"[^\W\d_]+")

_REQUIRED_FIELDS = ("id", "date", "type", "source", "text")


class Discourse(Enum):
    """Document type as separated in the newspaper metadata"""
    ARTICLE = "article"
    ADVERTISEMENT = "advertisement"

    @property
    def short_name(self) -> str:
        return "art" if self is Discourse.ARTICLE else "ads"


def tokenize(text: str) -> List[str]:
    """Split text into lowercased letter-only tokens, preserving order"""
    return [token.lower() for token in _TOKEN_RE.findall(text)]


def parse_date(value: str) -> date:
    """Parse an ISO-8601 calendar date (YYYY-MM-DD)"""
    return datetime.strptime(value, "%Y-%m-%d").date()


@dataclass(frozen=True)
class Document:
    """One dated, typed text unit of the corpus"""
    id: str
    date: date
    discourse: Discourse
    source: str
    text: str

    @cached_property
    def tokens(self) -> List[str]:
        return tokenize(self.text)

    @cached_property
    def token_counts(self) -> Counter[str]:
        return Counter(self.tokens)

    def to_dict(self) -> Dict[str, str]:
        return {
            'id': self.id,
            'date': self.date.isoformat(),
            'type': self.discourse.value,
            'source': self.source,
            'text': self.text,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'Document':
        missing = [name for name in _REQUIRED_FIELDS if name not in data]
        if missing:
            raise ValueError(f"missing field(s): {', '.join(missing)}")
        for name in _REQUIRED_FIELDS:
            if not isinstance(data[name], str):
                raise ValueError(f"field '{name}' must be a string")
        try:
            discourse = Discourse(data['type'])
        except ValueError:
            raise ValueError(f"unknown document type '{data['type']}' (expected 'article' or 'advertisement')")
        try:
            doc_date = parse_date(data['date'])
        except ValueError:
            raise ValueError(f"invalid date '{data['date']}' (expected YYYY-MM-DD)")
        return cls(
            id=data['id'],
            date=doc_date,
            discourse=discourse,
            source=data['source'],
            text=data['text'],
        )


def _open_text(path: Path, mode: str) -> IO[str]:
    if path.suffix == ".lz4":
        return lz4.frame.open(path, mode=mode + "t", encoding="utf-8")  # type: ignore[no-any-return]
    return open(path, mode, encoding="utf-8")


def read_corpus(path: Path, start: Optional[date] = None, end: Optional[date] = None) -> List[Document]:
    """
    Read a newline-delimited JSON corpus.

    Args:
        path: Corpus file (.jsonl, or .jsonl.lz4 for LZ4 frame compression)
        start: Earliest permitted document date
        end: Latest permitted document date

    Returns:
        Documents in file order

    Raises:
        ConfigError: If the file does not exist
        DataError: On a malformed record, naming its line number
    """
    if not path.is_file():
        raise ConfigError(f"Corpus file not found: {path}")

    documents: List[Document] = []
    with _open_text(path, "r") as f:
        for line_number, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as e:
                raise DataError(f"invalid JSON: {e.msg}", line_number)
            if not isinstance(record, dict):
                raise DataError("record is not a JSON object", line_number)
            try:
                doc = Document.from_dict(record)
            except ValueError as e:
                raise DataError(str(e), line_number)
            if (start is not None and doc.date < start) or (end is not None and doc.date > end):
                raise DataError(f"date {doc.date.isoformat()} outside the configured corpus range", line_number)
            documents.append(doc)

    logger.info(f"Loaded {len(documents)} documents from {path}")
    return documents


def write_corpus(path: Path, documents: Iterable[Document]) -> int:
    """Write documents as newline-delimited JSON, returning the record count"""
    count = 0
    with _open_text(path, "w") as f:
        for doc in documents:
            f.write(json.dumps(doc.to_dict(), ensure_ascii=False) + "\n")
            count += 1
    logger.info(f"Wrote {count} documents to {path}")
    return count
