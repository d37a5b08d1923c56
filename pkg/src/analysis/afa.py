"""
Hurst exponent estimation by Adaptive Fractal Analysis.

The series is integrated into a random walk, the walk is covered by
segments of odd length w = 2n+1 that overlap by n+1 points, an order-M
polynomial is fitted to every segment and the fits are blended across
each overlap with weights that fall linearly with the distance from the
segment centre. This gives a smooth global trend v(i). The fluctuation
F(w) is the RMS of u(i) - v(i), and the Hurst exponent is the slope of
log2 F(w) against log2 w.

    H < 0.5       anti-persistent
    H = 0.5       no memory (short-range dependence only)
    0.5 < H < 1   long-range dependence
    H > 1         non-stationary
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy import stats

from common.errors import ConfigError, DegenerateSeriesError
from config.constants import DEFAULT_POLY_ORDER, MIN_FIT_WINDOWS, MIN_SERIES_LENGTH, MIN_WINDOW_SIZE, Z_95

logger = logging.getLogger(__name__)

# Fluctuations below this fraction of the series' standard deviation count as zero
ZERO_FLUCTUATION = 1e-12


def min_window_size(poly_order: int) -> int:
    """Smallest odd window leaving residual degrees of freedom for an order-M fit"""
    return max(MIN_WINDOW_SIZE, 2 * poly_order + 3)


def nearest_odd(x: float) -> int:
    return 2 * int(round((x - 1) / 2)) + 1


def default_window_sizes(n: int, poly_order: int = DEFAULT_POLY_ORDER) -> Tuple[int, ...]:
    """Log-uniform window schedule: 2^(k/2) rounded to odd, within [min window, n/4]"""
    smallest = min_window_size(poly_order)
    windows: List[int] = []
    k = 0
    while 2 ** (k / 2) <= n / 4 + 2:
        w = nearest_odd(2 ** (k / 2))
        if smallest <= w <= n / 4 and (not windows or w > windows[-1]):
            windows.append(w)
        k += 1
    return tuple(windows)


@dataclass(frozen=True)
class AfaConfig:
    """Polynomial order, window schedule and fit range of an AFA run"""
    poly_order: int = DEFAULT_POLY_ORDER
    window_sizes: Optional[Tuple[int, ...]] = None  # None: log-uniform schedule per series
    fit_range: Optional[Tuple[int, int]] = None  # [start, stop) over window indices

    def __post_init__(self) -> None:
        if self.poly_order < 1:
            raise ConfigError(f"polynomial order must be a positive integer, got {self.poly_order}")
        if self.window_sizes is not None:
            windows = tuple(int(w) for w in self.window_sizes)
            smallest = min_window_size(self.poly_order)
            for w in windows:
                if w % 2 == 0 or w < smallest:
                    raise ConfigError(f"window size {w} must be odd and at least {smallest}")
            if any(b <= a for a, b in zip(windows, windows[1:])):
                raise ConfigError(f"window sizes must be strictly increasing: {list(windows)}")
            object.__setattr__(self, 'window_sizes', windows)
        if self.fit_range is not None:
            start, stop = (int(v) for v in self.fit_range)
            if start < 0 or stop - start < MIN_FIT_WINDOWS:
                raise ConfigError(f"fit range {self.fit_range} must cover at least {MIN_FIT_WINDOWS} windows")
            object.__setattr__(self, 'fit_range', (start, stop))

    def windows_for(self, n: int) -> Tuple[int, ...]:
        """Window sizes usable on a series of length n"""
        if self.window_sizes is None:
            windows = default_window_sizes(n, self.poly_order)
        else:
            windows = self.window_sizes
            if windows and windows[-1] > n / 4:
                raise DegenerateSeriesError(
                    f"largest window {windows[-1]} exceeds a quarter of the series length {n}")
        if len(windows) < MIN_FIT_WINDOWS:
            raise DegenerateSeriesError(
                f"series of length {n} admits only {len(windows)} window sizes, need {MIN_FIT_WINDOWS}")
        return windows


@dataclass(frozen=True, eq=False)
class AfaResult:
    """Fluctuation function and the fitted Hurst exponent"""
    window_sizes: Tuple[int, ...]
    log2_w: np.ndarray
    log2_F: np.ndarray
    hurst: float
    slope_stderr: float
    r_squared: float
    intercept: float
    excluded_windows: Tuple[int, ...] = field(default=())

    def ci95(self) -> Tuple[float, float]:
        return self.hurst - Z_95 * self.slope_stderr, self.hurst + Z_95 * self.slope_stderr

    def to_dict(self) -> Dict[str, Any]:
        return {
            'hurst': self.hurst,
            'slope_stderr': self.slope_stderr,
            'r_squared': self.r_squared,
            'intercept': self.intercept,
            'window_sizes': list(self.window_sizes),
            'log2_w': [float(v) for v in self.log2_w],
            'log2_F': [float(v) for v in self.log2_F],
            'excluded_windows': list(self.excluded_windows),
        }


def to_random_walk(series: Sequence[float]) -> np.ndarray:
    """
    Cumulative sum of deviations from the mean.

    Raises:
        DegenerateSeriesError: If the series has fewer than 8 points
    """
    x = np.asarray(series, dtype=float)
    if x.ndim != 1 or len(x) < MIN_SERIES_LENGTH:
        raise DegenerateSeriesError(f"series needs at least {MIN_SERIES_LENGTH} points, got {len(x)}")
    return np.cumsum(x - x.mean())


def blend_weights(n: int) -> Tuple[np.ndarray, np.ndarray]:
    """Weights (w1, w2) for overlap positions l = 1..n+1"""
    l = np.arange(1, n + 2)
    w2 = (l - 1) / n
    return 1.0 - w2, w2


def _polynomial_fits(segments: np.ndarray, centre: int, poly_order: int) -> np.ndarray:
    """Least-squares polynomial fit of every row, evaluated on the row's points"""
    length = segments.shape[1]
    x = (np.arange(length) - centre) / max(centre, 1)
    design = np.vander(x, poly_order + 1, increasing=True)
    coefficients, *_ = np.linalg.lstsq(design, segments.T, rcond=None)
    return (design @ coefficients).T


def global_trend(walk: Sequence[float], w: int, poly_order: int) -> np.ndarray:
    """
    Smooth global trend of a walk for window size w = 2n+1.

    Raises:
        ConfigError: If w is even or smaller than 2M+3
        DegenerateSeriesError: If w exceeds the walk length
    """
    u = np.asarray(walk, dtype=float)
    N = len(u)
    if w % 2 == 0 or w < 2 * poly_order + 3:
        raise ConfigError(f"window size {w} must be odd and at least {2 * poly_order + 3} for order {poly_order}")
    if w > N:
        raise DegenerateSeriesError(f"window size {w} exceeds series length {N}")

    n = (w - 1) // 2
    starts = np.arange(0, N - w + 1, n)
    fits = _polynomial_fits(sliding_window_view(u, w)[starts], n, poly_order)
    pieces: List[Tuple[int, np.ndarray]] = list(zip(starts.tolist(), fits))

    # Points beyond the last full segment: fit the trailing partial segment on what is there
    last = int(starts[-1])
    if last + w < N:
        tail_start = last + n
        tail = _polynomial_fits(u[tail_start:][np.newaxis, :], n, poly_order)[0]
        pieces.append((tail_start, tail))

    w1, w2 = blend_weights(n)
    trend = np.empty(N)
    first_start, first_fit = pieces[0]
    trend[first_start:first_start + len(first_fit)] = first_fit
    for (_, fit_a), (start_b, fit_b) in zip(pieces, pieces[1:]):
        trend[start_b:start_b + n + 1] = w1 * fit_a[n:] + w2 * fit_b[:n + 1]
        trend[start_b + n + 1:start_b + len(fit_b)] = fit_b[n + 1:]
    return trend


def fluctuation(walk: Sequence[float], w: int, poly_order: int) -> float:
    """RMS deviation of the walk from its global trend"""
    u = np.asarray(walk, dtype=float)
    residual = u - global_trend(u, w, poly_order)
    return float(np.sqrt(np.mean(residual ** 2)))


def estimate_hurst(series: Sequence[float], cfg: Optional[AfaConfig] = None) -> AfaResult:
    """
    Estimate the Hurst exponent of a series.

    Windows with zero fluctuation are left out of the fit and logged.

    Raises:
        DegenerateSeriesError: If the series is constant, too short for the
            window schedule, or leaves fewer than 3 usable windows
    """
    cfg = cfg or AfaConfig()
    x = np.asarray(series, dtype=float)
    walk = to_random_walk(x)
    scale = float(np.std(x))
    if scale == 0.0:
        raise DegenerateSeriesError("constant series has no fluctuations")

    windows = cfg.windows_for(len(x))
    if cfg.fit_range is not None:
        start, stop = cfg.fit_range
        windows = windows[start:stop]
        if len(windows) < MIN_FIT_WINDOWS:
            raise DegenerateSeriesError(f"fit range {cfg.fit_range} leaves {len(windows)} windows")

    F = np.array([fluctuation(walk, w, cfg.poly_order) for w in windows])
    usable = F > ZERO_FLUCTUATION * scale
    excluded = tuple(w for w, ok in zip(windows, usable) if not ok)
    if excluded:
        logger.warning(f"Excluding windows with zero fluctuation from the fit: {list(excluded)}")
    if np.count_nonzero(usable) < MIN_FIT_WINDOWS:
        raise DegenerateSeriesError(
            f"only {np.count_nonzero(usable)} windows have nonzero fluctuation, need {MIN_FIT_WINDOWS}")

    kept = tuple(w for w, ok in zip(windows, usable) if ok)
    log2_w = np.log2(np.array(kept, dtype=float))
    log2_F = np.log2(F[usable])
    fit = stats.linregress(log2_w, log2_F)
    r_squared = min(1.0, max(0.0, float(fit.rvalue) ** 2))
    logger.debug(f"AFA: N={len(x)}, windows={list(kept)}, H={fit.slope:.4f} ± {fit.stderr:.4f}")
    return AfaResult(
        window_sizes=kept,
        log2_w=log2_w,
        log2_F=log2_F,
        hurst=float(fit.slope),
        slope_stderr=float(fit.stderr),
        r_squared=r_squared,
        intercept=float(fit.intercept),
        excluded_windows=excluded,
    )
