"""
Bidirectional Granger causality between two aligned series.

Both series are lag-1 differenced, a lag order k is fixed or chosen by BIC,
and in each direction the model of y on its own k lags (restricted) is
compared with the model that adds k lags of x (full) by an F-test.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, NamedTuple, Optional, Sequence

import numpy as np
from scipy import stats

from analysis.regression import ols, residuals
from common.errors import ConfigError, DataError, DegenerateSeriesError
from common.json_codec import finite_or_none
from config.constants import DEFAULT_ALPHA, DEFAULT_MAX_LAG

logger = logging.getLogger(__name__)


class LagSelection(Enum):
    FIXED = "fixed"
    BIC = "bic"


@dataclass(frozen=True)
class GrangerConfig:
    """Lag order policy and significance level"""
    max_lag: int = DEFAULT_MAX_LAG
    lag_selection: LagSelection = LagSelection.BIC
    fixed_lag: Optional[int] = None
    alpha: float = DEFAULT_ALPHA

    def __post_init__(self) -> None:
        if self.max_lag < 1:
            raise ConfigError(f"max_lag must be at least 1, got {self.max_lag}")
        if not 0.0 < self.alpha < 1.0:
            raise ConfigError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.lag_selection is LagSelection.FIXED:
            if self.fixed_lag is None or self.fixed_lag < 1:
                raise ConfigError(f"fixed lag selection needs a lag of at least 1, got {self.fixed_lag}")


class FTest(NamedTuple):
    f_stat: float
    p_value: float


@dataclass(frozen=True)
class GrangerResult:
    """F statistics and p-values of both directions at one lag order"""
    lag: int
    f_xy: float
    p_xy: float
    f_yx: float
    p_yx: float
    n_obs: int

    def to_dict(self) -> Dict[str, Any]:
        return {
            'lag': self.lag,
            'f_xy': finite_or_none(self.f_xy),
            'p_xy': self.p_xy,
            'f_yx': finite_or_none(self.f_yx),
            'p_yx': self.p_yx,
            'n_obs': self.n_obs,
        }


def difference(series: Sequence[float], lag: int = 1) -> np.ndarray:
    """d(i) = x(i + lag) - x(i)"""
    x = np.asarray(series, dtype=float)
    if lag < 1:
        raise ConfigError(f"difference lag must be positive, got {lag}")
    if len(x) <= lag:
        raise DegenerateSeriesError(f"cannot difference a series of length {len(x)} at lag {lag}")
    return x[lag:] - x[:-lag]


def max_feasible_lag(length: int) -> int:
    """Largest k with T - k > 2k + 1"""
    return (length - 2) // 3


def lag_columns(series: np.ndarray, k: int, start: int) -> np.ndarray:
    """Columns series[t-1], ..., series[t-k] for t = start .. T-1"""
    T = len(series)
    return np.column_stack([series[start - j:T - j] for j in range(1, k + 1)])


def _design(own: np.ndarray, other: Optional[np.ndarray], k: int, start: int) -> np.ndarray:
    blocks = [np.ones((len(own) - start, 1)), lag_columns(own, k, start)]
    if other is not None:
        blocks.append(lag_columns(other, k, start))
    return np.hstack(blocks)


def _check_pair(x: Sequence[float], y: Sequence[float]) -> tuple[np.ndarray, np.ndarray]:
    xa = np.asarray(x, dtype=float)
    ya = np.asarray(y, dtype=float)
    if xa.ndim != 1 or ya.ndim != 1 or len(xa) != len(ya):
        raise DataError(f"series must be one-dimensional with equal lengths, got {xa.shape} and {ya.shape}")
    return xa, ya


def granger_test(x: Sequence[float], y: Sequence[float], k: int) -> FTest:
    """
    F-test of whether k lags of x improve the prediction of y.

    Raises:
        DegenerateSeriesError: If T - k <= 2k + 1
        CollinearityError: If lagged regressors are collinear
    """
    xa, ya = _check_pair(x, y)
    if k < 1:
        raise ConfigError(f"lag must be positive, got {k}")
    T = len(ya)
    df_den = T - 3 * k - 1
    if df_den <= 0:
        raise DegenerateSeriesError(f"series of length {T} is too short for lag {k}")

    target = ya[k:]
    rss_r = ols(_design(ya, None, k, k), target).rss
    rss_f = ols(_design(ya, xa, k, k), target).rss

    numerator = max(rss_r - rss_f, 0.0) / k
    if rss_f <= 0.0:
        if numerator == 0.0:
            return FTest(0.0, 1.0)
        return FTest(float('inf'), 0.0)
    f_stat = numerator / (rss_f / df_den)
    p_value = float(stats.f.sf(f_stat, k, df_den))
    return FTest(float(f_stat), min(1.0, max(0.0, p_value)))


def _system_bic(x: np.ndarray, y: np.ndarray, k: int, start: int) -> float:
    # Sums of products are elementwise so that swapping x and y gives the same value bit for bit
    e_y = residuals(_design(y, x, k, start), y[start:])
    e_x = residuals(_design(x, y, k, start), x[start:])
    n = len(e_y)
    s_xx = float(np.sum(e_x * e_x)) / n
    s_yy = float(np.sum(e_y * e_y)) / n
    s_xy = float(np.sum(e_x * e_y)) / n
    det = s_xx * s_yy - s_xy * s_xy
    n_params = 2 * (2 * k + 1)
    if det <= 0.0:
        return float('-inf')
    return n * float(np.log(det)) + n_params * float(np.log(n))


def select_lag(x: Sequence[float], y: Sequence[float], max_lag: int) -> int:
    """
    Lag order in [1, max_lag] minimizing the BIC of the bivariate lag-k system.

    Every candidate is scored on the same observations t = max_lag .. T-1.
    Ties go to the smaller lag.
    """
    xa, ya = _check_pair(x, y)
    if max_lag < 1:
        raise ConfigError(f"max_lag must be at least 1, got {max_lag}")
    if max_lag > max_feasible_lag(len(xa)):
        raise DegenerateSeriesError(f"series of length {len(xa)} is too short for max lag {max_lag}")
    if max_lag == 1:
        return 1

    best_lag, best_bic = 1, float('inf')
    for k in range(1, max_lag + 1):
        bic = _system_bic(xa, ya, k, max_lag)
        logger.debug(f"BIC(k={k}) = {bic:.6g}")
        if bic < best_bic:
            best_lag, best_bic = k, bic
    return best_lag


def bidirectional(x: Sequence[float], y: Sequence[float], cfg: Optional[GrangerConfig] = None) -> GrangerResult:
    """
    Granger tests in both directions after lag-1 differencing.

    The lag search is capped at the largest order the differenced length allows.
    """
    cfg = cfg or GrangerConfig()
    xa, ya = _check_pair(x, y)
    dx = difference(xa, 1)
    dy = difference(ya, 1)
    T = len(dx)

    if cfg.lag_selection is LagSelection.FIXED:
        assert cfg.fixed_lag is not None
        k = cfg.fixed_lag
    else:
        max_lag = min(cfg.max_lag, max_feasible_lag(T))
        if max_lag < 1:
            raise DegenerateSeriesError(f"differenced series of length {T} is too short for any lag")
        if max_lag < cfg.max_lag:
            logger.info(f"Capping the lag search at {max_lag} for differenced length {T}")
        k = select_lag(dx, dy, max_lag)

    f_xy, p_xy = granger_test(dx, dy, k)
    f_yx, p_yx = granger_test(dy, dx, k)
    return GrangerResult(lag=k, f_xy=f_xy, p_xy=p_xy, f_yx=f_yx, p_yx=p_yx, n_obs=T - k)
