"""
Synthetic validation batteries.

Each battery generates signals with a known answer, runs the estimator
or test on them and compares the outcome with a tolerance. All seeds
derive from the run seed through numpy's SeedSequence.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, List, Sequence, Tuple

import numpy as np
from scipy import stats

from analysis.afa import AfaConfig, estimate_hurst
from analysis.granger import GrangerConfig, bidirectional, granger_test
from analysis.stats import group_h_regression
from classify.taxonomy import CausalClass, causal_class
from common.errors import ConfigError
from config.constants import DEFAULT_ALPHA
from ingest.documents import Discourse
from synth.fgn import FgnSpec, gen_fgn, gen_random_walk, make_rng
from synth.var import VarSpec, gen_var

logger = logging.getLogger(__name__)


class Battery(Enum):
    HURST = "hurst"
    NONSTATIONARY = "nonstationary"
    CALIBRATION = "calibration"
    POWER = "power"
    TAXONOMY = "taxonomy"
    GROUP_REGRESSION = "group-regression"


@dataclass(frozen=True)
class ValidateOptions:
    batteries: Tuple[Battery, ...] = tuple(Battery)
    hursts: Tuple[float, ...] = (0.3, 0.5, 0.7, 0.9)
    n: int = 8192
    reps: int = 20
    hurst_tolerance: float = 0.05
    per_seed_tolerance: float = 0.15
    calibration_pairs: int = 10_000
    calibration_length: int = 400
    calibration_lag: int = 2
    power_trials: int = 1000
    power_length: int = 500
    coupling: float = 0.5
    taxonomy_keywords: int = 265
    taxonomy_mix: Tuple[float, float, float, float] = (0.20, 0.17, 0.49, 0.14)
    regression_reps: int = 100
    regression_n: int = 265
    alpha: float = DEFAULT_ALPHA
    afa: AfaConfig = field(default_factory=AfaConfig)

    def __post_init__(self) -> None:
        for name in ('n', 'reps', 'calibration_pairs', 'power_trials', 'taxonomy_keywords', 'regression_reps'):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name.replace('_', ' ')} must be at least 1, got {getattr(self, name)}")
        if not self.batteries:
            raise ConfigError("no validation battery selected")
        if abs(sum(self.taxonomy_mix) - 1.0) > 1e-9:
            raise ConfigError(f"taxonomy mix must sum to 1, got {self.taxonomy_mix}")


@dataclass(frozen=True)
class BatteryResult:
    """One row of the validation table"""
    battery: str
    truth: str
    estimate: float
    tolerance: str
    passed: bool
    details: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'battery': self.battery,
            'truth': self.truth,
            'estimate': self.estimate,
            'tolerance': self.tolerance,
            'passed': self.passed,
            'details': self.details,
        }


def child_seeds(seed: int, stream: int, count: int) -> List[int]:
    """Independent 63-bit seeds for one battery"""
    state = np.random.SeedSequence([seed, stream]).generate_state(count, dtype=np.uint64)
    return [int(s) >> 1 for s in state]


def hurst_recovery(hurst: float, options: ValidateOptions, seed: int) -> BatteryResult:
    estimates = np.array([
        estimate_hurst(gen_fgn(FgnSpec(options.n, hurst, s)), options.afa).hurst
        for s in child_seeds(seed, 10_000 + int(round(hurst * 1000)), options.reps)
    ])
    mean = float(estimates.mean())
    worst = float(np.max(np.abs(estimates - hurst)))
    passed = abs(mean - hurst) <= options.hurst_tolerance and worst <= options.per_seed_tolerance
    return BatteryResult(
        battery=f"hurst H={hurst:g}",
        truth=f"{hurst:g}",
        estimate=mean,
        tolerance=f"mean ±{options.hurst_tolerance:g}, each ±{options.per_seed_tolerance:g}",
        passed=passed,
        details={'n': options.n, 'reps': options.reps, 'max_abs_error': worst, 'sd': float(estimates.std())},
    )


def nonstationary_regime(options: ValidateOptions, seed: int) -> BatteryResult:
    estimates = np.array([
        estimate_hurst(gen_random_walk(options.n, s), options.afa).hurst
        for s in child_seeds(seed, 1, options.reps)
    ])
    mean = float(estimates.mean())
    return BatteryResult(
        battery="non-stationary (summed noise)",
        truth="1.5",
        estimate=mean,
        tolerance="[1.4, 1.6]",
        passed=1.4 <= mean <= 1.6,
        details={'n': options.n, 'reps': options.reps},
    )


def granger_calibration(options: ValidateOptions, seed: int) -> BatteryResult:
    """Type-I error of the F-test on independent AR(1) pairs"""
    rejections = 0
    for s in child_seeds(seed, 2, options.calibration_pairs):
        x, y = gen_var(VarSpec(options.calibration_length, a_xx=0.5, a_yy=0.5, seed=s))
        if granger_test(x, y, options.calibration_lag).p_value < options.alpha:
            rejections += 1
    low, high = stats.binom.interval(0.99, options.calibration_pairs, options.alpha)
    rate = rejections / options.calibration_pairs
    return BatteryResult(
        battery="granger calibration",
        truth=f"{options.alpha:g}",
        estimate=rate,
        tolerance=f"binomial 99% [{low / options.calibration_pairs:.4g}, {high / options.calibration_pairs:.4g}]",
        passed=bool(low <= rejections <= high),
        details={'pairs': options.calibration_pairs, 'length': options.calibration_length,
                 'lag': options.calibration_lag, 'rejections': rejections},
    )


def granger_power(options: ValidateOptions, seed: int) -> BatteryResult:
    """
    Detection of a one-way coupling and the false positive rate of the reverse direction.

    The pairs are integrated: the lag-1 differences the test runs on are the coupled
    autoregression itself.
    """
    cfg = GrangerConfig(alpha=options.alpha)
    detected = reverse = 0
    for s in child_seeds(seed, 3, options.power_trials):
        x, y = gen_var(VarSpec(options.power_length, a_xx=0.2, a_yy=0.2, a_xy=options.coupling, seed=s,
                                integrated=True))
        result = bidirectional(x, y, cfg)
        detected += result.p_xy < options.alpha
        reverse += result.p_yx < options.alpha
    power = detected / options.power_trials
    false_positive = reverse / options.power_trials
    return BatteryResult(
        battery="granger power",
        truth=f"x->y, a_xy={options.coupling:g}",
        estimate=power,
        tolerance="power > 0.95, reverse <= 0.02",
        passed=power > 0.95 and false_positive <= 0.02,
        details={'trials': options.power_trials, 'length': options.power_length,
                 'reverse_rejection_rate': false_positive},
    )


# ads are x, articles are y; integrated like the corpus series the pipeline differences
TAXONOMY_GENERATORS: Dict[CausalClass, Callable[[int, int], VarSpec]] = {
    CausalClass.SHAPING: lambda n, s: VarSpec(n, a_xx=0.2, a_yy=0.2, a_xy=0.5, seed=s, integrated=True),
    CausalClass.REFLECTING: lambda n, s: VarSpec(n, a_xx=0.2, a_yy=0.2, a_yx=0.5, seed=s, integrated=True),
    CausalClass.COMPLEX: lambda n, s: VarSpec(n, a_xx=0.2, a_yy=0.2, a_xy=0.4, a_yx=0.4, common_sd=0.5, seed=s,
                                              integrated=True),
    CausalClass.NONE: lambda n, s: VarSpec(n, a_xx=0.2, a_yy=0.2, seed=s, integrated=True),
}


def taxonomy_sizes(total: int, mix: Sequence[float]) -> Dict[CausalClass, int]:
    """Keywords per causal class; the last class absorbs rounding"""
    classes = [CausalClass.SHAPING, CausalClass.REFLECTING, CausalClass.COMPLEX, CausalClass.NONE]
    sizes = {c: int(round(share * total)) for c, share in zip(classes[:-1], mix[:-1])}
    sizes[classes[-1]] = total - sum(sizes.values())
    return sizes


def taxonomy_simulation(options: ValidateOptions, seed: int) -> BatteryResult:
    """Recover the causal class of simulated keyword pairs"""
    cfg = GrangerConfig(alpha=options.alpha)
    sizes = taxonomy_sizes(options.taxonomy_keywords, options.taxonomy_mix)
    seeds = iter(child_seeds(seed, 4, options.taxonomy_keywords))
    accuracy: Dict[str, float] = {}
    for truth, size in sizes.items():
        if size == 0:
            continue
        correct = 0
        for _ in range(size):
            x, y = gen_var(TAXONOMY_GENERATORS[truth](options.power_length, next(seeds)))
            result = bidirectional(x, y, cfg)
            correct += causal_class(result.p_xy, result.p_yx, options.alpha) is truth
        accuracy[truth.value] = correct / size
    worst = min(accuracy.values())
    return BatteryResult(
        battery="taxonomy simulation",
        truth=", ".join(f"{c.value} {n}" for c, n in sizes.items()),
        estimate=worst,
        tolerance="each class >= 0.8",
        passed=worst >= 0.8,
        details={'accuracy': accuracy},
    )


def group_regression(options: ValidateOptions, seed: int) -> BatteryResult:
    """Recover the article/advertisement difference in mean H"""
    betas, ps = [], []
    groups = [Discourse.ARTICLE] * options.regression_n + [Discourse.ADVERTISEMENT] * options.regression_n
    for s in child_seeds(seed, 5, options.regression_reps):
        rng = make_rng(s)
        h = np.concatenate([rng.normal(0.9, 0.18, options.regression_n),
                            rng.normal(1.1, 0.18, options.regression_n)])
        result = group_h_regression(h, groups)
        betas.append(result.beta_group)
        ps.append(result.p)
    mean_beta = float(np.mean(betas))
    return BatteryResult(
        battery="H group regression",
        truth="-0.2",
        estimate=mean_beta,
        tolerance="±0.03, p < 1e-5",
        passed=abs(mean_beta + 0.2) <= 0.03 and max(ps) < 1e-5,
        details={'reps': options.regression_reps, 'n_per_group': options.regression_n, 'max_p': max(ps)},
    )


def run_validation(options: ValidateOptions, seed: int) -> List[BatteryResult]:
    """Run the selected batteries in a fixed order"""
    results: List[BatteryResult] = []
    for battery in Battery:
        if battery not in options.batteries:
            continue
        logger.info(f"Running validation battery '{battery.value}'")
        if battery is Battery.HURST:
            new = [hurst_recovery(h, options, seed) for h in options.hursts]
        elif battery is Battery.NONSTATIONARY:
            new = [nonstationary_regime(options, seed)]
        elif battery is Battery.CALIBRATION:
            new = [granger_calibration(options, seed)]
        elif battery is Battery.POWER:
            new = [granger_power(options, seed)]
        elif battery is Battery.TAXONOMY:
            new = [taxonomy_simulation(options, seed)]
        else:
            new = [group_regression(options, seed)]
        for result in new:
            logger.info(f"{result.battery}: estimate {result.estimate:.4g}, {'pass' if result.passed else 'FAIL'}")
        results += new
    return results
