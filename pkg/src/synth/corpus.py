"""
Synthetic corpora whose keyword frequencies follow given series.

Every day gets one advertisement and one article. A document holds
``tokens_per_doc`` tokens, of which round(f * tokens_per_doc) are the
keyword, where f = base + scale * value for that day's series value
(clipped to [0, 1]). The remaining tokens are filler words.
"""

import logging
from datetime import date, timedelta
from pathlib import Path
from typing import Dict, List, Mapping, Sequence, Tuple

import numpy as np

from common.errors import ConfigError
from ingest.documents import Discourse, Document, write_corpus

logger = logging.getLogger(__name__)

FILLER_WORDS = ("de", "het", "een", "en", "van", "in", "op", "met")
SYNTHETIC_ARTICLE_SOURCE = "Synthetische Courant"
SYNTHETIC_AD_SOURCE = "Advertenties"


def _frequency_counts(values: np.ndarray, base: float, scale: float, tokens_per_doc: int) -> np.ndarray:
    freqs = np.clip(base + scale * values, 0.0, 1.0)
    return np.rint(freqs * tokens_per_doc).astype(np.int64)


def _document_text(counts: Dict[str, int], tokens_per_doc: int) -> str:
    tokens: List[str] = []
    for keyword in sorted(counts):
        tokens.extend([keyword] * counts[keyword])
    filler = tokens_per_doc - len(tokens)
    tokens.extend(FILLER_WORDS[i % len(FILLER_WORDS)] for i in range(filler))
    return " ".join(tokens)


def synthetic_documents(pairs: Mapping[str, Tuple[Sequence[float], Sequence[float]]], start: date,
                        base: float = 0.1, scale: float = 0.02,
                        tokens_per_doc: int = 200) -> List[Document]:
    """
    Build the documents of a synthetic corpus.

    Args:
        pairs: keyword -> (advertisement series, article series), all of one length
        start: Date of the first day
        base: Frequency at series value 0
        scale: Frequency change per unit of series value
        tokens_per_doc: Document length in tokens

    Raises:
        ConfigError: On empty input, unequal lengths, or keyword counts that do not fit a document
    """
    if not pairs:
        raise ConfigError("synthetic corpus needs at least one keyword")
    if tokens_per_doc < 1:
        raise ConfigError(f"tokens_per_doc must be positive, got {tokens_per_doc}")
    lengths = {len(series) for ads, art in pairs.values() for series in (ads, art)}
    if len(lengths) != 1:
        raise ConfigError(f"all synthetic series must have one length, got {sorted(lengths)}")
    for keyword in pairs:
        if keyword in FILLER_WORDS or not keyword.isalpha() or keyword != keyword.lower():
            raise ConfigError(f"'{keyword}' cannot be used as a synthetic keyword")

    counts = {
        (keyword, discourse): _frequency_counts(np.asarray(series, dtype=float), base, scale, tokens_per_doc)
        for keyword, (ads, art) in pairs.items()
        for discourse, series in ((Discourse.ADVERTISEMENT, ads), (Discourse.ARTICLE, art))
    }
    for discourse in Discourse:
        total = sum(c for (_, d), c in counts.items() if d is discourse)
        if np.max(total) > tokens_per_doc:
            raise ConfigError(f"keyword counts exceed {tokens_per_doc} tokens per document; lower base or scale")

    n_days = lengths.pop()
    documents: List[Document] = []
    for day in range(n_days):
        when = start + timedelta(days=day)
        for discourse, source in ((Discourse.ADVERTISEMENT, SYNTHETIC_AD_SOURCE),
                                  (Discourse.ARTICLE, SYNTHETIC_ARTICLE_SOURCE)):
            day_counts = {keyword: int(counts[(keyword, discourse)][day]) for keyword in pairs}
            documents.append(Document(
                id=f"{discourse.short_name}-{day:06d}",
                date=when,
                discourse=discourse,
                source=source,
                text=_document_text(day_counts, tokens_per_doc),
            ))
    return documents


def write_synthetic_corpus(path: Path, pairs: Mapping[str, Tuple[Sequence[float], Sequence[float]]],
                           start: date, base: float = 0.1, scale: float = 0.02,
                           tokens_per_doc: int = 200) -> int:
    """Write a synthetic corpus as JSONL, returning the number of documents"""
    documents = synthetic_documents(pairs, start, base, scale, tokens_per_doc)
    return write_corpus(path, documents)
