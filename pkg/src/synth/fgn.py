"""
Fractional Gaussian noise by circulant embedding (Davies-Harte).
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict

import numpy as np

from common.errors import ConfigError, NumericalError
from config.constants import RNG_ALGORITHM

logger = logging.getLogger(__name__)

MIN_FGN_LENGTH = 64
# Eigenvalues this far below zero, relative to the largest, are rounding noise
EIGENVALUE_TOLERANCE = 1e-10


def make_rng(seed: int) -> np.random.Generator:
    """The seeded random source used by every generator"""
    return np.random.Generator(np.random.PCG64(seed))


@dataclass(frozen=True)
class FgnSpec:
    n: int
    hurst: float
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n < MIN_FGN_LENGTH or self.n & (self.n - 1):
            raise ConfigError(f"fGn length must be a power of two >= {MIN_FGN_LENGTH}, got {self.n}")
        if not 0.0 < self.hurst < 1.0:
            raise ConfigError(f"Hurst exponent must lie in (0, 1), got {self.hurst}")
        if self.seed < 0:
            raise ConfigError(f"seed must be non-negative, got {self.seed}")

    def metadata(self) -> Dict[str, Any]:
        return {'generator': 'fgn', 'n': self.n, 'hurst': self.hurst, 'seed': self.seed, 'rng': RNG_ALGORITHM}


def fgn_autocovariance(lags: np.ndarray, hurst: float) -> np.ndarray:
    """gamma(k) = (|k+1|^2H - 2|k|^2H + |k-1|^2H) / 2"""
    k = np.abs(np.asarray(lags, dtype=float))
    two_h = 2.0 * hurst
    return 0.5 * (np.abs(k + 1) ** two_h - 2.0 * k ** two_h + np.abs(k - 1) ** two_h)


def circulant_eigenvalues(n: int, hurst: float) -> np.ndarray:
    """Eigenvalues of the 2n circulant matrix embedding the n x n fGn covariance"""
    gamma = fgn_autocovariance(np.arange(n + 1), hurst)
    row = np.concatenate([gamma, gamma[-2:0:-1]])
    return np.fft.fft(row).real


def gen_fgn(spec: FgnSpec) -> np.ndarray:
    """
    Unit-variance fGn sample of length spec.n, deterministic per seed.

    Raises:
        NumericalError: If the circulant embedding is not non-negative definite
    """
    eigenvalues = circulant_eigenvalues(spec.n, spec.hurst)
    if eigenvalues.min() < -EIGENVALUE_TOLERANCE * eigenvalues.max():
        raise NumericalError(f"circulant embedding has negative eigenvalue {eigenvalues.min():.3g}")
    eigenvalues = np.clip(eigenvalues, 0.0, None)

    m = len(eigenvalues)
    rng = make_rng(spec.seed)
    noise = rng.standard_normal(m) + 1j * rng.standard_normal(m)
    sample = np.fft.fft(np.sqrt(eigenvalues / m) * noise)
    return np.ascontiguousarray(sample.real[:spec.n])


def gen_random_walk(n: int, seed: int) -> np.ndarray:
    """Cumulative sum of white noise, a non-stationary signal with H near 1.5 under AFA"""
    if n < 1:
        raise ConfigError(f"length must be positive, got {n}")
    return np.cumsum(make_rng(seed).standard_normal(n))
