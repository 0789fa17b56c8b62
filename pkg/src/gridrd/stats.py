"""Two-sample mean-difference testing for discovery-time experiments.

The test combines an unequal-variance standard error,

    se = sqrt(s_a^2/n_a + s_b^2/n_b),

with POOLED degrees of freedom df = n_a + n_b - 2.  That hybrid is not the
textbook Welch test (whose Satterthwaite df would differ); it is the
combination the toolkit's built-in comparison series are calibrated
against, so it is the default on purpose.  A standards-compliant Welch df
is available behind ``welch_df=True``.  The verdict rule is: a difference
is insignificant iff the confidence interval contains 0 or the p-value
exceeds alpha.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .special import t_cdf, t_quantile

__all__ = [
    "EmptySample",
    "InsufficientData",
    "InvalidAlpha",
    "MeanDifferenceTest",
    "SummaryStats",
    "Verdict",
    "degrees_of_freedom",
    "mean",
    "mean_difference",
    "se_mean_difference",
    "stddev",
    "summarize_sample",
    "t_cdf",
    "t_quantile",
    "test_from_summary",
    "unpaired_t_test",
    "welch_degrees_of_freedom",
]


class StatsError(Exception):
    pass


class EmptySample(StatsError):
    pass


class InsufficientData(StatsError):
    pass


class InvalidAlpha(StatsError):
    pass


class Verdict(str, Enum):
    """Outcome labels: DIFFERENT marks a statistically significant difference."""

    DIFFERENT = "Different"
    INSIGNIFICANT = "Insignificant"


@dataclass(frozen=True)
class SummaryStats:
    n: int
    mean: float
    stddev: float


@dataclass(frozen=True)
class MeanDifferenceTest:
    """Full output of one two-sample comparison.

    ``degenerate`` flags a zero standard error (all observations on both
    sides identical up to a constant), where the tail probability is taken
    as 0 or 1 depending on whether the means differ at all.
    """

    mean_diff: float
    se: float
    df: float
    t_score: float
    p_value: float
    alpha: float
    ci_low: float
    ci_high: float
    verdict: Verdict
    degenerate: bool = False


def mean(sample: Sequence[float]) -> float:
    """Arithmetic mean, accumulated with compensated summation."""
    if len(sample) == 0:
        raise EmptySample("mean of an empty sample")
    return math.fsum(sample) / len(sample)


def stddev(sample: Sequence[float]) -> float:
    """Sample standard deviation (n-1 divisor), two-pass for stability."""
    n = len(sample)
    if n < 2:
        raise InsufficientData(f"standard deviation needs n >= 2, got {n}")
    center = mean(sample)
    ss = math.fsum((x - center) ** 2 for x in sample)
    return math.sqrt(ss / (n - 1))


def summarize_sample(sample: Sequence[float]) -> SummaryStats:
    return SummaryStats(n=len(sample), mean=mean(sample), stddev=stddev(sample))


def mean_difference(a: Sequence[float], b: Sequence[float]) -> float:
    return mean(a) - mean(b)


def se_mean_difference(a: Sequence[float], b: Sequence[float]) -> float:
    """Standard error of the mean difference: sqrt(s_a^2/n_a + s_b^2/n_b)."""
    sa, sb = stddev(a), stddev(b)
    return math.sqrt(sa * sa / len(a) + sb * sb / len(b))


def degrees_of_freedom(a: Sequence[float], b: Sequence[float]) -> int:
    """Pooled two-sample degrees of freedom, n_a + n_b - 2."""
    total = len(a) + len(b)
    if total < 3:
        raise InsufficientData(f"pooled df needs n_a + n_b >= 3, got {total}")
    return total - 2


def welch_degrees_of_freedom(a: Sequence[float], b: Sequence[float]) -> float:
    """Welch-Satterthwaite df; the standards-compliant alternative."""
    va = stddev(a) ** 2 / len(a)
    vb = stddev(b) ** 2 / len(b)
    if va + vb == 0.0:
        return float(degrees_of_freedom(a, b))
    return (va + vb) ** 2 / (va * va / (len(a) - 1) + vb * vb / (len(b) - 1))


def _assemble(mean_diff: float, se: float, df: float, alpha: float,
              degenerate: bool) -> MeanDifferenceTest:
    if degenerate:
        if mean_diff == 0.0:
            t_score, p_value = 0.0, 1.0
        else:
            t_score = math.copysign(math.inf, mean_diff)
            p_value = 0.0
        ci_low = ci_high = mean_diff
    else:
        t_score = mean_diff / se
        p_value = 2.0 * (1.0 - t_cdf(abs(t_score), df))
        half_width = t_quantile(1.0 - alpha / 2.0, df) * se
        ci_low, ci_high = mean_diff - half_width, mean_diff + half_width
    insignificant = (ci_low <= 0.0 <= ci_high) or p_value > alpha
    return MeanDifferenceTest(
        mean_diff=mean_diff,
        se=se,
        df=df,
        t_score=t_score,
        p_value=p_value,
        alpha=alpha,
        ci_low=ci_low,
        ci_high=ci_high,
        verdict=Verdict.INSIGNIFICANT if insignificant else Verdict.DIFFERENT,
        degenerate=degenerate,
    )


def _check_alpha(alpha: float) -> None:
    if not 0.0 < alpha < 1.0:
        raise InvalidAlpha(f"alpha must be in (0, 1), got {alpha}")


def unpaired_t_test(a: Sequence[float], b: Sequence[float], alpha: float = 0.05,
                    welch_df: bool = False) -> MeanDifferenceTest:
    """Two-independent-sample test of the mean difference mean(a) - mean(b)."""
    _check_alpha(alpha)
    if len(a) < 2 or len(b) < 2:
        raise InsufficientData("both samples need n >= 2")
    diff = mean_difference(a, b)
    se = se_mean_difference(a, b)
    df = welch_degrees_of_freedom(a, b) if welch_df else float(degrees_of_freedom(a, b))
    if se == 0.0:
        return _assemble(diff, se, df, alpha, degenerate=True)
    return _assemble(diff, se, df, alpha, degenerate=False)


def test_from_summary(mean_diff: float, se: float, df: float,
                      alpha: float = 0.05) -> MeanDifferenceTest:
    """Same tail computation as unpaired_t_test, from published summaries."""
    _check_alpha(alpha)
    if se <= 0.0:
        raise InsufficientData(f"summary standard error must be positive, got {se}")
    if df < 1:
        raise InsufficientData(f"degrees of freedom must be >= 1, got {df}")
    return _assemble(mean_diff, se, df, alpha, degenerate=False)


test_from_summary.__test__ = False  # a library function, not a pytest case
