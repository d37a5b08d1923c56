"""
Supporting statistics: correlations with Fisher-Z averaging, tests of the
Hurst exponent against the no-memory baseline, normality, and the
regression of H on discourse.
"""

import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from scipy import special, stats

from analysis.regression import ols
from common.errors import DataError, DegenerateSeriesError, NumericalError
from config.constants import DEFAULT_ALPHA
from ingest.documents import Discourse

logger = logging.getLogger(__name__)

SHAPIRO_MIN_N = 3
SHAPIRO_MAX_N = 5000


# Distribution tails

def normal_sf(z: float) -> float:
    """Upper tail of the standard normal distribution"""
    return float(stats.norm.sf(z))


def t_sf(t: float, df: float) -> float:
    """Upper tail of Student's t distribution"""
    return float(stats.t.sf(t, df))


def f_sf(x: float, df_num: float, df_den: float) -> float:
    """Upper tail of the F distribution"""
    return float(stats.f.sf(x, df_num, df_den))


def chi2_sf(x: float, df: float) -> float:
    """Upper tail of the chi-square distribution"""
    return float(stats.chi2.sf(x, df))


# Correlation

class Correlation(NamedTuple):
    r: float
    p: float
    n: int


def pearson(x: Sequence[float], y: Sequence[float]) -> Correlation:
    """
    Product-moment correlation with a two-sided p-value (t with n-2 df).

    Raises:
        DataError: On unequal lengths or fewer than 3 points
        DegenerateSeriesError: If either series is constant
    """
    xa = np.asarray(x, dtype=float)
    ya = np.asarray(y, dtype=float)
    if len(xa) != len(ya):
        raise DataError(f"correlated series differ in length: {len(xa)} and {len(ya)}")
    if len(xa) < 3:
        raise DataError(f"correlation needs at least 3 points, got {len(xa)}")
    if np.ptp(xa) == 0.0 or np.ptp(ya) == 0.0:
        raise DegenerateSeriesError("correlation is undefined for a constant series")
    result = stats.pearsonr(xa, ya)
    r = min(1.0, max(-1.0, float(result.statistic)))
    return Correlation(r, float(result.pvalue), len(xa))


def fisher_z(r: float) -> float:
    if abs(r) >= 1.0:
        raise NumericalError(f"Fisher z is undefined for |r| >= 1, got {r}")
    return float(np.arctanh(r))


def fisher_z_inv(z: float) -> float:
    return float(np.tanh(z))


def mean_r(rs: Sequence[float]) -> float:
    """Average correlation through the Fisher-Z transform"""
    if len(rs) == 0:
        raise NumericalError("cannot average an empty list of correlations")
    return fisher_z_inv(math.fsum(fisher_z(r) for r in rs) / len(rs))


@dataclass(frozen=True)
class CorrelationSummary:
    """Correlations of one pair of discourses across keywords"""
    pairwise_r: Tuple[Tuple[str, float, float, int], ...]
    mean_r: float
    prop_significant: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            'pairwise_r': [{'keyword': k, 'r': r, 'p': p, 'n': n} for k, r, p, n in self.pairwise_r],
            'mean_r': self.mean_r,
            'prop_significant': self.prop_significant,
        }


def summarize_correlations(pairs: Sequence[Tuple[str, Sequence[float], Sequence[float]]],
                           alpha: float = DEFAULT_ALPHA) -> Optional[CorrelationSummary]:
    """
    Correlate each keyword's pair of series and average the coefficients.

    Constant series are skipped; perfect correlations are reported but left
    out of the Fisher-Z mean. Returns None when no keyword can be correlated.
    """
    rows: List[Tuple[str, float, float, int]] = []
    for keyword, x, y in pairs:
        try:
            corr = pearson(x, y)
        except (DataError, DegenerateSeriesError) as e:
            logger.info(f"No correlation for '{keyword}': {e}")
            continue
        rows.append((keyword, corr.r, corr.p, corr.n))
    if not rows:
        return None

    finite = [r for _, r, _, _ in rows if abs(r) < 1.0]
    if len(finite) < len(rows):
        logger.warning(f"{len(rows) - len(finite)} perfect correlations left out of the mean")
    average = mean_r(finite) if finite else float(np.sign(rows[0][1]))
    significant = sum(1 for _, _, p, _ in rows if p < alpha)
    return CorrelationSummary(tuple(rows), average, significant / len(rows))


# Tests on Hurst exponents

class TTest(NamedTuple):
    t: float
    df: int
    p: float


def one_sample_t(values: Sequence[float], mu0: float) -> TTest:
    """
    One-sample t-test of the mean against mu0, two-sided.

    Raises:
        DegenerateSeriesError: If n < 2 or the sample variance is zero
    """
    x = np.asarray(values, dtype=float)
    if len(x) < 2:
        raise DegenerateSeriesError(f"t-test needs at least 2 values, got {len(x)}")
    if np.ptp(x) == 0.0:
        raise DegenerateSeriesError("t-test is undefined for zero sample variance")
    t = float(stats.ttest_1samp(x, mu0).statistic)
    df = len(x) - 1
    return TTest(t, df, min(1.0, 2.0 * t_sf(abs(t), df)))


class ShapiroWilk(NamedTuple):
    w: float
    p: float


# Royston's polynomial approximations, highest degree first
_SW_C1 = np.array([-2.706056, 4.434685, -2.071190, -0.147981, 0.221157, 0.0])
_SW_C2 = np.array([-3.582633, 5.682633, -1.752461, -0.293762, 0.042981, 0.0])
_SW_C3 = np.array([-0.0006714, 0.025054, -0.39978, 0.5440])
_SW_C4 = np.array([-0.0020322, 0.062767, -0.77857, 1.3822])
_SW_C5 = np.array([0.0038915, -0.083751, -0.31082, -1.5861])
_SW_C6 = np.array([0.0030302, -0.082676, -0.4803])
_SW_GAMMA = np.array([0.459, -2.273])
_SW_SMALL_P = 1e-19


def shapiro_coefficients(n: int) -> np.ndarray:
    """Weights a_1 >= ... >= a_{n//2} applied to x_(n+1-i) - x_(i)"""
    if n == 3:
        return np.array([math.sqrt(0.5)])
    half = np.arange(1, n // 2 + 1)
    m = -special.ndtri((half - 0.375) / (n + 0.25))
    summ2 = 2.0 * float(np.sum(m * m))
    ssumm2 = math.sqrt(summ2)
    rsn = 1.0 / math.sqrt(n)
    a = m.copy()
    a1 = float(np.polyval(_SW_C1, rsn)) + m[0] / ssumm2
    if n > 5:
        a2 = float(np.polyval(_SW_C2, rsn)) + m[1] / ssumm2
        fac = math.sqrt((summ2 - 2.0 * m[0] ** 2 - 2.0 * m[1] ** 2) / (1.0 - 2.0 * a1 ** 2 - 2.0 * a2 ** 2))
        a /= fac
        a[0], a[1] = a1, a2
    else:
        fac = math.sqrt((summ2 - 2.0 * m[0] ** 2) / (1.0 - 2.0 * a1 ** 2))
        a /= fac
        a[0] = a1
    return a


def _shapiro_p(w: float, n: int) -> float:
    if n == 3:
        # exact null distribution
        p = 6.0 / math.pi * (math.asin(math.sqrt(w)) - math.pi / 3.0)
        return min(1.0, max(0.0, p))
    w1 = 1.0 - w
    if w1 <= 0.0:
        return 1.0
    y = math.log(w1)
    if n <= 11:
        gamma = float(np.polyval(_SW_GAMMA, n))
        if y >= gamma:
            return _SW_SMALL_P
        y = -math.log(gamma - y)
        m = float(np.polyval(_SW_C3, n))
        s = math.exp(float(np.polyval(_SW_C4, n)))
    else:
        log_n = math.log(n)
        m = float(np.polyval(_SW_C5, log_n))
        s = math.exp(float(np.polyval(_SW_C6, log_n)))
    return normal_sf((y - m) / s)


def shapiro_wilk(values: Sequence[float]) -> ShapiroWilk:
    """
    Shapiro-Wilk W test of normality with Royston's coefficients and p-value
    approximation, evaluated in double precision.

    Raises:
        DataError: If n is outside [3, 5000]
        DegenerateSeriesError: If all values are equal
    """
    x = np.sort(np.asarray(values, dtype=float))
    n = len(x)
    if not SHAPIRO_MIN_N <= n <= SHAPIRO_MAX_N:
        raise DataError(f"Shapiro-Wilk needs between {SHAPIRO_MIN_N} and {SHAPIRO_MAX_N} values, got {n}")
    if np.ptp(x) == 0.0:
        raise DegenerateSeriesError("Shapiro-Wilk is undefined for identical values")

    a = shapiro_coefficients(n)
    half = len(a)
    spread = x[::-1][:half] - x[:half]
    ss = float(np.sum((x - x.mean()) ** 2))
    w = min(1.0, float(np.dot(a, spread)) ** 2 / ss)
    return ShapiroWilk(w, _shapiro_p(w, n))


@dataclass(frozen=True)
class GroupRegressionResult:
    """Regression of H on an article dummy, advertisements as baseline"""
    beta_group: float
    se_beta: float
    f_stat: float
    chi2_vs_constant: float
    p: float
    intercept: float
    t_stat: float
    chi2_p: float
    df_resid: int
    n_articles: int
    n_ads: int

    def to_dict(self) -> Dict[str, Any]:
        return {
            'beta_group': self.beta_group,
            'se_beta': self.se_beta,
            'f_stat': self.f_stat,
            'chi2_vs_constant': self.chi2_vs_constant,
            'p': self.p,
            'intercept': self.intercept,
            't_stat': self.t_stat,
            'chi2_p': self.chi2_p,
            'df_resid': self.df_resid,
            'n_articles': self.n_articles,
            'n_ads': self.n_ads,
        }


def group_h_regression(h: Sequence[float], group: Sequence[Discourse]) -> GroupRegressionResult:
    """
    OLS of H on intercept + article dummy.

    Reports the dummy coefficient with its standard error, the F-test
    against the constant model and the likelihood-ratio chi-square (1 df).

    Raises:
        DataError: If the lists differ in length or a group is empty
        DegenerateSeriesError: If the fit leaves no residual variance
    """
    values = np.asarray(h, dtype=float)
    if len(values) != len(group):
        raise DataError(f"{len(values)} H values but {len(group)} group labels")
    dummy = np.array([1.0 if g is Discourse.ARTICLE else 0.0 for g in group])
    n_articles = int(dummy.sum())
    n = len(values)
    n_ads = n - n_articles
    if n_articles == 0 or n_ads == 0:
        raise DataError("group regression needs H values for both articles and advertisements")
    df_resid = n - 2
    if df_resid < 1:
        raise DegenerateSeriesError("group regression needs at least 3 H values")

    design = np.column_stack([np.ones(n), dummy])
    fit = ols(design, values)
    rss_full = fit.rss
    rss_const = float(np.sum((values - values.mean()) ** 2))
    if rss_full <= 0.0:
        raise DegenerateSeriesError("H values do not vary within groups")

    intercept, beta = (float(c) for c in fit.coefficients)
    sigma2 = rss_full / df_resid
    se_beta = math.sqrt(sigma2 * (1.0 / n_articles + 1.0 / n_ads))
    t_stat = beta / se_beta
    explained = rss_const - rss_full
    # equal group means leave only rounding residue
    if explained <= 0.0 or math.isclose(rss_full, rss_const, rel_tol=1e-12):
        explained = 0.0
    f_stat = explained / sigma2
    chi2 = n * math.log(rss_const / rss_full) if explained > 0.0 else 0.0
    return GroupRegressionResult(
        beta_group=beta,
        se_beta=se_beta,
        f_stat=f_stat,
        chi2_vs_constant=chi2,
        p=f_sf(f_stat, 1, df_resid),
        intercept=intercept,
        t_stat=t_stat,
        chi2_p=chi2_sf(chi2, 1),
        df_resid=df_resid,
        n_articles=n_articles,
        n_ads=n_ads,
    )
