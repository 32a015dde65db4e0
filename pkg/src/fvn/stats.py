"""Statistical oracles and meters: goodness-of-fit tests, moment
estimators, and the uniform-consumption meter behind every efficiency
claim."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special as _special
from scipy import stats as _scipy_stats

from .bitstream import UniformSource
from .samplers import SamplerConfig, make_sampler

# Bins with expected count below this are merged into the tail.
MIN_EXPECTED_COUNT = 5.0


@dataclass(frozen=True)
class TestReport:
    test_name: str
    statistic: float
    critical_value: float
    n: int
    passed: bool


@dataclass(frozen=True)
class ConsumptionReport:
    sampler_kind: str
    samples: int
    uniforms: int
    mean_per_sample: float
    ci95_halfwidth: float


def exp1_cdf(x):
    return -np.expm1(-np.asarray(x, dtype=float))


def std_normal_cdf(x):
    return _special.ndtr(np.asarray(x, dtype=float))


def uniform_cdf(x):
    return np.clip(np.asarray(x, dtype=float), 0.0, 1.0)


def ks_critical(alpha: float, n: int) -> float:
    """Asymptotic one-sample critical value c(alpha)/sqrt(n); c(0.01) ~ 1.628."""
    return math.sqrt(0.5 * math.log(2.0 / alpha)) / math.sqrt(n)


def ks_test(samples, cdf, alpha: float = 0.01, name: str = "ks") -> TestReport:
    """One-sample Kolmogorov-Smirnov test on pre-sorted samples."""
    x = np.asarray(samples, dtype=float)
    if x.size == 0:
        raise ValueError("ks_test needs at least one sample")
    if np.any(np.diff(x) < 0):
        raise ValueError("ks_test requires sorted samples")
    f = np.asarray(cdf(x), dtype=float)
    n = x.size
    steps = np.arange(1, n + 1) / n
    d = max(float(np.max(steps - f)), float(np.max(f - (steps - 1.0 / n))))
    crit = ks_critical(alpha, n)
    return TestReport(name, d, crit, n, d < crit)


def chi_square_test(observed, expected, n: int, alpha: float = 0.01,
                    name: str = "chi_square") -> TestReport:
    """Pearson test of counts against a probability vector.

    Tail bins whose expected count falls below MIN_EXPECTED_COUNT are merged
    rightward into their predecessor before computing the statistic.
    """
    obs = [float(c) for c in observed]
    probs = [float(p) for p in expected]
    if len(obs) != len(probs):
        raise ValueError("observed and expected lengths differ")
    if abs(sum(probs) - 1.0) > 1e-6:
        raise ValueError(f"expected probabilities sum to {sum(probs)}, not 1")
    while len(probs) > 1 and probs[-1] * n < MIN_EXPECTED_COUNT:
        probs[-2] += probs[-1]
        obs[-2] += obs[-1]
        del probs[-1], obs[-1]
    if len(probs) < 2 or any(p * n < MIN_EXPECTED_COUNT for p in probs):
        raise ValueError("bins too sparse even after merging the tail")
    stat = sum((o - p * n) ** 2 / (p * n) for o, p in zip(obs, probs))
    dof = len(probs) - 1
    crit = float(_scipy_stats.chi2.ppf(1.0 - alpha, dof))
    return TestReport(name, stat, crit, n, stat < crit)


def measure_consumption(config: SamplerConfig, n: int, seed: int) -> ConsumptionReport:
    """Mean fresh uniforms per output sample on a fresh metered source.

    Any setup cost (e.g. pool bootstrap) is amortized into the mean; the
    confidence halfwidth comes from the per-sample cost variance.
    """
    if n < 100_000:
        raise ValueError(f"consumption runs need n >= 100000, got {n}")
    src = UniformSource(seed)
    sampler = make_sampler(config, src)
    costs = np.empty(n, dtype=np.int64)
    before = src.draws
    for i in range(n):
        sampler()
        after = src.draws
        costs[i] = after - before
        before = after
    uniforms = src.draws
    halfwidth = 1.96 * float(np.std(costs, ddof=1)) / math.sqrt(n)
    return ConsumptionReport(config.kind, n, uniforms, uniforms / n, halfwidth)


def moments(samples) -> tuple[float, float, float, float]:
    """(mean, unbiased variance, skewness, excess kurtosis)."""
    x = np.asarray(samples, dtype=float)
    if x.size < 2:
        raise ValueError("moments need at least two samples")
    mean = float(np.mean(x))
    centered = x - mean
    m2 = float(np.mean(centered ** 2))
    var = m2 * x.size / (x.size - 1)
    if m2 == 0.0:
        return mean, 0.0, 0.0, 0.0
    skew = float(np.mean(centered ** 3)) / m2 ** 1.5
    exkurt = float(np.mean(centered ** 4)) / m2 ** 2 - 3.0
    return mean, var, skew, exkurt
