"""
Coupled bivariate autoregressions with a known causal direction.

    x_t = a_xx x_{t-1} + a_yx y_{t-L} + e_x + c_t
    y_t = a_yy y_{t-1} + a_xy x_{t-L} + e_y + c_t

L is the coupling lag (1 by default) and c_t an optional common shock
shared by both equations. An integrated pair is the running sum of such a
pair: its lag-1 differences follow the autoregression exactly.
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, Tuple

import numpy as np
from scipy import signal

from common.errors import ConfigError, NumericalError
from config.constants import RNG_ALGORITHM, VAR_BURN_IN
from synth.fgn import make_rng

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class VarSpec:
    n: int
    a_xx: float = 0.0
    a_yy: float = 0.0
    a_xy: float = 0.0
    a_yx: float = 0.0
    noise_sd: float = 1.0
    seed: int = 0
    common_sd: float = 0.0
    coupling_lag: int = 1
    integrated: bool = False

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ConfigError(f"length must be positive, got {self.n}")
        if self.noise_sd <= 0.0:
            raise ConfigError(f"noise_sd must be positive, got {self.noise_sd}")
        if self.common_sd < 0.0:
            raise ConfigError(f"common_sd must be non-negative, got {self.common_sd}")
        if self.coupling_lag < 1:
            raise ConfigError(f"coupling lag must be positive, got {self.coupling_lag}")
        if self.seed < 0:
            raise ConfigError(f"seed must be non-negative, got {self.seed}")

    def companion(self) -> np.ndarray:
        """Companion matrix of the VAR(L) written in state-space form"""
        L = self.coupling_lag
        lagged = [np.zeros((2, 2)) for _ in range(L)]
        lagged[0] += np.array([[self.a_xx, 0.0], [0.0, self.a_yy]])
        lagged[L - 1] += np.array([[0.0, self.a_yx], [self.a_xy, 0.0]])
        matrix = np.zeros((2 * L, 2 * L))
        matrix[:2, :] = np.hstack(lagged)
        if L > 1:
            matrix[2:, :-2] = np.eye(2 * (L - 1))
        return matrix

    def spectral_radius(self) -> float:
        return float(np.max(np.abs(np.linalg.eigvals(self.companion()))))

    def metadata(self) -> Dict[str, Any]:
        return {
            'generator': 'var',
            'n': self.n,
            'a_xx': self.a_xx,
            'a_yy': self.a_yy,
            'a_xy': self.a_xy,
            'a_yx': self.a_yx,
            'noise_sd': self.noise_sd,
            'common_sd': self.common_sd,
            'coupling_lag': self.coupling_lag,
            'integrated': self.integrated,
            'seed': self.seed,
            'burn_in': VAR_BURN_IN,
            'rng': RNG_ALGORITHM,
        }


def gen_var(spec: VarSpec) -> Tuple[np.ndarray, np.ndarray]:
    """
    Simulate the pair (x, y), discarding a burn-in of 500 samples.

    Raises:
        NumericalError: If the coefficients are not stationary
    """
    radius = spec.spectral_radius()
    if radius >= 1.0:
        raise NumericalError(f"VAR coefficients are not stationary (spectral radius {radius:.4f})")

    total = VAR_BURN_IN + spec.n
    rng = make_rng(spec.seed)
    shocks = rng.standard_normal((total, 2)) * spec.noise_sd
    common = rng.standard_normal(total) * spec.common_sd
    shocks += common[:, np.newaxis]

    if spec.a_xy == 0.0 and spec.a_yx == 0.0:
        # Decoupled: two independent AR(1) filters
        x = signal.lfilter([1.0], [1.0, -spec.a_xx], shocks[:, 0])
        y = signal.lfilter([1.0], [1.0, -spec.a_yy], shocks[:, 1])
    else:
        L = spec.coupling_lag
        x = np.zeros(total)
        y = np.zeros(total)
        for t in range(total):
            x[t] = shocks[t, 0]
            y[t] = shocks[t, 1]
            if t >= 1:
                x[t] += spec.a_xx * x[t - 1]
                y[t] += spec.a_yy * y[t - 1]
            if t >= L:
                x[t] += spec.a_yx * y[t - L]
                y[t] += spec.a_xy * x[t - L]
    x, y = x[VAR_BURN_IN:], y[VAR_BURN_IN:]
    if spec.integrated:
        x, y = np.cumsum(x), np.cumsum(y)
    return np.ascontiguousarray(x), np.ascontiguousarray(y)
