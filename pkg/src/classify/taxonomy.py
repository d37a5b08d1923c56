"""
Causality x persistence taxonomy of keywords.

Advertisements are x and articles are y throughout: p_xy tests whether
advertisements Granger-cause articles.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Sequence

from analysis.afa import AfaResult
from analysis.granger import GrangerResult
from common.errors import DataError
from config.constants import NO_MEMORY_HURST, Z_95

logger = logging.getLogger(__name__)


class CausalClass(Enum):
    SHAPING = "shaping"  # advertisements -> articles only
    REFLECTING = "reflecting"  # articles -> advertisements only
    COMPLEX = "complex"  # both directions
    NONE = "none"


class PersistenceClass(Enum):
    ANTI_PERSISTENT = "anti_persistent"
    SHORT_RANGE = "short_range"
    PERSISTENT = "persistent"
    NON_STATIONARY = "non_stationary"


class TrendGroup(Enum):
    """Grouping on where a persistent trend appears"""
    ARTICLES_ONLY = "articles_only"
    BOTH = "both"
    ADS_ONLY = "ads_only"
    NONE = "none"


def causal_class(p_xy: float, p_yx: float, alpha: float) -> CausalClass:
    ads_to_art = p_xy < alpha
    art_to_ads = p_yx < alpha
    if ads_to_art and art_to_ads:
        return CausalClass.COMPLEX
    if ads_to_art:
        return CausalClass.SHAPING
    if art_to_ads:
        return CausalClass.REFLECTING
    return CausalClass.NONE


def classify_hurst(hurst: float, stderr: float) -> PersistenceClass:
    """
    Persistence regime from a Hurst estimate and its standard error.

    The 95% interval H +/- 1.96 SE decides: containing 0.5 means short-range,
    otherwise below 0.5 is anti-persistent, wholly above 1 is non-stationary
    and anything else is persistent.
    """
    low = hurst - Z_95 * stderr
    high = hurst + Z_95 * stderr
    if low <= NO_MEMORY_HURST <= high:
        return PersistenceClass.SHORT_RANGE
    if hurst < NO_MEMORY_HURST:
        return PersistenceClass.ANTI_PERSISTENT
    if low > 1.0:
        return PersistenceClass.NON_STATIONARY
    return PersistenceClass.PERSISTENT


def persistence_class(res: AfaResult) -> PersistenceClass:
    return classify_hurst(res.hurst, res.slope_stderr)


@dataclass(frozen=True)
class BehaviorCell:
    """A keyword's causal and persistence classes with the estimates behind them"""
    keyword: str
    causal: CausalClass
    persistence_articles: PersistenceClass
    persistence_ads: PersistenceClass
    h_articles: float
    h_ads: float
    granger: GrangerResult
    h_articles_se: float = 0.0
    h_ads_se: float = 0.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.h_articles) and math.isfinite(self.h_ads)):
            raise DataError(f"keyword '{self.keyword}' has a non-finite Hurst exponent")

    @classmethod
    def from_results(cls, keyword: str, afa_articles: AfaResult, afa_ads: AfaResult,
                     granger: GrangerResult, alpha: float) -> 'BehaviorCell':
        return cls(
            keyword=keyword,
            causal=causal_class(granger.p_xy, granger.p_yx, alpha),
            persistence_articles=persistence_class(afa_articles),
            persistence_ads=persistence_class(afa_ads),
            h_articles=afa_articles.hurst,
            h_ads=afa_ads.hurst,
            granger=granger,
            h_articles_se=afa_articles.slope_stderr,
            h_ads_se=afa_ads.slope_stderr,
        )

    @property
    def trend_group(self) -> TrendGroup:
        in_articles = self.persistence_articles is PersistenceClass.PERSISTENT
        in_ads = self.persistence_ads is PersistenceClass.PERSISTENT
        if in_articles and in_ads:
            return TrendGroup.BOTH
        if in_articles:
            return TrendGroup.ARTICLES_ONLY
        if in_ads:
            return TrendGroup.ADS_ONLY
        return TrendGroup.NONE


# Persistence regimes and causal classes kept in the 3 x 3 view
PROJECTED_CAUSAL = (CausalClass.SHAPING, CausalClass.REFLECTING, CausalClass.COMPLEX)
PROJECTED_PERSISTENCE = (PersistenceClass.ANTI_PERSISTENT, PersistenceClass.SHORT_RANGE, PersistenceClass.PERSISTENT)


def _crosstab(cells: Sequence[BehaviorCell], articles: bool,
              causal_classes: Sequence[CausalClass] = tuple(CausalClass),
              persistence_classes: Sequence[PersistenceClass] = tuple(PersistenceClass)) -> Dict[str, Dict[str, int]]:
    table = {c.value: {p.value: 0 for p in persistence_classes} for c in causal_classes}
    for cell in cells:
        persistence = cell.persistence_articles if articles else cell.persistence_ads
        if cell.causal in causal_classes and persistence in persistence_classes:
            table[cell.causal.value][persistence.value] += 1
    return table


@dataclass(frozen=True)
class TaxonomySummary:
    """Distribution of keywords over the taxonomy"""
    n_keywords: int
    pct: Dict[CausalClass, float]
    mean_h_art: float
    mean_h_ads: float
    trend_groups: Dict[str, Dict[str, List[str]]]
    crosstab: Dict[str, Dict[str, Dict[str, int]]]
    crosstab_3x3: Dict[str, Dict[str, Dict[str, int]]]
    extras: Dict[str, Any] = field(default_factory=dict)

    @property
    def delta_h(self) -> float:
        """Mean H of advertisements minus mean H of articles"""
        return self.mean_h_ads - self.mean_h_art

    def with_extras(self, **extras: Any) -> 'TaxonomySummary':
        merged = dict(self.extras)
        merged.update(extras)
        return TaxonomySummary(self.n_keywords, self.pct, self.mean_h_art, self.mean_h_ads,
                               self.trend_groups, self.crosstab, self.crosstab_3x3, merged)

    def to_dict(self) -> Dict[str, Any]:
        document: Dict[str, Any] = {
            'n_keywords': self.n_keywords,
            'pct_shaping': self.pct[CausalClass.SHAPING],
            'pct_reflecting': self.pct[CausalClass.REFLECTING],
            'pct_complex': self.pct[CausalClass.COMPLEX],
            'pct_none': self.pct[CausalClass.NONE],
            'mean_h_art': self.mean_h_art,
            'mean_h_ads': self.mean_h_ads,
            'delta_h': self.delta_h,
            'table1_groups': self.trend_groups,
            'crosstab': self.crosstab,
            'crosstab_3x3': self.crosstab_3x3,
        }
        document.update(self.extras)
        return document


def tabulate(cells: Sequence[BehaviorCell]) -> TaxonomySummary:
    """
    Percentages per causal class, persistent-trend grouping and causal x persistence
    cross-tabulations for each discourse.

    Raises:
        DataError: If there are no cells
    """
    if not cells:
        raise DataError("cannot tabulate an empty set of keywords")

    n = len(cells)
    pct = {c: 100.0 * sum(1 for cell in cells if cell.causal is c) / n for c in CausalClass}

    groups: Dict[str, Dict[str, List[str]]] = {
        g.value: {c.value: [] for c in CausalClass} for g in TrendGroup
    }
    for cell in cells:
        groups[cell.trend_group.value][cell.causal.value].append(cell.keyword)
    for by_class in groups.values():
        for keywords in by_class.values():
            keywords.sort()

    crosstab = {'articles': _crosstab(cells, True), 'ads': _crosstab(cells, False)}
    projected = {
        'articles': _crosstab(cells, True, PROJECTED_CAUSAL, PROJECTED_PERSISTENCE),
        'ads': _crosstab(cells, False, PROJECTED_CAUSAL, PROJECTED_PERSISTENCE),
    }
    mean_h_art = math.fsum(cell.h_articles for cell in cells) / n
    mean_h_ads = math.fsum(cell.h_ads for cell in cells) / n
    logger.info(", ".join(f"{c.value} {pct[c]:.1f}%" for c in CausalClass))
    return TaxonomySummary(n, pct, mean_h_art, mean_h_ads, groups, crosstab, projected)
