"""
Keyword specifications: a canonical keyword and the surface forms collapsed onto it.
"""

import csv
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, FrozenSet, List, Optional, Tuple

from common.errors import ConfigError, DataError
from ingest.documents import Document, tokenize

logger = logging.getLogger(__name__)


def normalize_form(form: str) -> str:
    """Normalize a surface form the same way document text is tokenized"""
    return " ".join(tokenize(form))


@dataclass(frozen=True)
class KeywordSpec:
    """A keyword with the singular/plural (or other) surface forms counted as one"""
    canonical: str
    surface_forms: FrozenSet[str]
    _by_first_token: Dict[str, List[Tuple[str, ...]]] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        forms = frozenset(normalize_form(f) for f in self.surface_forms) - {""}
        if not forms:
            raise DataError(f"keyword '{self.canonical}' has no surface forms")
        if normalize_form(self.canonical) not in forms:
            raise DataError(f"canonical form '{self.canonical}' is not among its surface forms")
        object.__setattr__(self, 'surface_forms', forms)

        by_first: Dict[str, List[Tuple[str, ...]]] = {}
        for form in sorted(forms):
            parts = tuple(form.split(" "))
            by_first.setdefault(parts[0], []).append(parts)
        object.__setattr__(self, '_by_first_token', by_first)

    @classmethod
    def of(cls, canonical: str, *forms: str) -> 'KeywordSpec':
        """Build a spec whose forms always include the canonical keyword"""
        return cls(canonical=canonical, surface_forms=frozenset((canonical,) + forms))

    @property
    def single_token(self) -> bool:
        return all(" " not in form for form in self.surface_forms)

    def count_matches(self, tokens: List[str]) -> int:
        """Count token positions at which any surface form starts"""
        matches = 0
        for i, token in enumerate(tokens):
            candidates = self._by_first_token.get(token)
            if not candidates:
                continue
            for parts in candidates:
                if len(parts) == 1 or tuple(tokens[i:i + len(parts)]) == parts:
                    matches += 1
                    break
        return matches

    def count_in(self, doc: Document) -> int:
        if self.single_token:
            counts = doc.token_counts
            return sum(counts[form] for form in self.surface_forms)
        return self.count_matches(doc.tokens)


def doc_relative_frequency(doc: Document, spec: KeywordSpec) -> Optional[float]:
    """
    Relative frequency of a keyword in one document.

    Returns:
        Matches divided by the token count, or None for a document without
        tokens (degenerate OCR output, excluded from aggregation)
    """
    n_tokens = len(doc.tokens)
    if n_tokens == 0:
        return None
    return spec.count_in(doc) / n_tokens


def read_keywords(path: Path) -> List[KeywordSpec]:
    """
    Read a keyword list CSV with columns ``canonical,surface_forms``.

    Surface forms are ``|``-separated; the canonical keyword is always counted.

    Raises:
        ConfigError: If the file does not exist
        DataError: On a malformed row or a duplicated keyword
    """
    if not path.is_file():
        raise ConfigError(f"Keyword file not found: {path}")

    specs: List[KeywordSpec] = []
    seen = set()
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.DictReader(f)
        if reader.fieldnames is None or not {"canonical", "surface_forms"} <= set(reader.fieldnames):
            raise DataError("keyword file needs the columns canonical,surface_forms", 1)
        for row in reader:
            line_number = reader.line_num
            canonical = (row.get("canonical") or "").strip()
            if not canonical:
                raise DataError("empty canonical keyword", line_number)
            if canonical in seen:
                raise DataError(f"duplicated keyword '{canonical}'", line_number)
            forms = [form for form in (row.get("surface_forms") or "").split("|") if form.strip()]
            try:
                spec = KeywordSpec.of(canonical, *forms)
            except DataError as e:
                raise DataError(str(e), line_number)
            seen.add(canonical)
            specs.append(spec)

    logger.info(f"Loaded {len(specs)} keywords from {path}")
    return specs
