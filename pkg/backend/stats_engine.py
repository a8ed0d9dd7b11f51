#!/usr/bin/env python3
"""
Per-trace statistics and ensemble confidence intervals
Also selects the scalar demand statistic x that drives the optimizer
"""

from dataclasses import dataclass
from enum import Enum
from typing import List, Sequence

import numpy as np
from scipy import stats

from demand_model import DemandTrace
from exceptions import EmptyTrace, InsufficientRealizations, InvalidLevel
from logging_config import get_logger

logger = get_logger(__name__)


class StatsConfig:
    """Configuration class for statistics estimation"""
    DEFAULT_LEVEL = 0.95
    MIN_REALIZATIONS = 2


@dataclass(frozen=True)
class TraceStats:
    mean: float
    variance: float
    maximum: int


@dataclass(frozen=True)
class ConfidenceInterval:
    lower: float
    upper: float
    level: float

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lower + self.upper)

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def contains(self, value: float) -> bool:
        return self.lower <= value <= self.upper


@dataclass(frozen=True)
class DemandStatistics:
    """95 % (by default) CIs for the expected per-trace mean, variance and maximum"""
    mean_ci: ConfidenceInterval
    variance_ci: ConfidenceInterval
    max_ci: ConfidenceInterval
    n_realizations: int


class StatisticMode(str, Enum):
    MEAN_BASED = 'mean'
    MAXIMA_BASED = 'maxima'


class CiBound(str, Enum):
    LOWER = 'lower'
    UPPER = 'upper'


@dataclass(frozen=True)
class StatisticSelector:
    mode: StatisticMode
    bound: CiBound = CiBound.LOWER

    @classmethod
    def parse(cls, text: str) -> 'StatisticSelector':
        """Parse 'mean/lower', 'maxima/upper', ..."""
        mode, _, bound = text.strip().lower().partition('/')
        return cls(StatisticMode(mode.strip()), CiBound((bound or 'lower').strip()))

    @property
    def label(self) -> str:
        return f'{self.mode.value}-{self.bound.value}'

    def __str__(self) -> str:
        return f'{self.mode.value}/{self.bound.value}'


def trace_statistics(trace: DemandTrace) -> TraceStats:
    values = np.asarray(trace.values, dtype=np.float64)
    if values.size == 0:
        raise EmptyTrace('cannot compute statistics of an empty trace')
    variance = float(np.var(values, ddof=1)) if values.size > 1 else 0.0
    return TraceStats(mean=float(np.mean(values)), variance=variance,
                      maximum=int(np.max(trace.values)))


def t_interval(sample: np.ndarray, level: float) -> ConfidenceInterval:
    """Two-sided Student-t interval on the expectation of an i.i.d. sample"""
    n = sample.size
    center = float(np.mean(sample))
    sem = float(np.std(sample, ddof=1)) / np.sqrt(n)
    half_width = float(stats.t.ppf(0.5 + level / 2.0, df=n - 1)) * sem
    return ConfidenceInterval(lower=center - half_width, upper=center + half_width, level=level)


def ensemble_confidence_intervals(ensemble: Sequence[DemandTrace],
                                  level: float = StatsConfig.DEFAULT_LEVEL) -> DemandStatistics:
    if len(ensemble) < StatsConfig.MIN_REALIZATIONS:
        raise InsufficientRealizations(
            f'need at least {StatsConfig.MIN_REALIZATIONS} realizations, got {len(ensemble)}'
        )
    if not 0.0 < level < 1.0:
        raise InvalidLevel(f'confidence level must lie in (0, 1), got {level}')

    per_trace: List[TraceStats] = [trace_statistics(trace) for trace in ensemble]
    means = np.array([s.mean for s in per_trace])
    variances = np.array([s.variance for s in per_trace])
    maxima = np.array([s.maximum for s in per_trace], dtype=np.float64)

    variance_ci = t_interval(variances, level)
    if variance_ci.lower < 0.0:
        variance_ci = ConfidenceInterval(lower=0.0, upper=max(variance_ci.upper, 0.0), level=level)

    result = DemandStatistics(
        mean_ci=t_interval(means, level),
        variance_ci=variance_ci,
        max_ci=t_interval(maxima, level),
        n_realizations=len(per_trace),
    )
    logger.debug(
        f'✅ CIs over {len(per_trace)} realizations: mean [{result.mean_ci.lower:.3f}, '
        f'{result.mean_ci.upper:.3f}], max [{result.max_ci.lower:.3f}, {result.max_ci.upper:.3f}]'
    )
    return result


def select_statistic(demand_stats: DemandStatistics, selector: StatisticSelector) -> float:
    """x_A or x_B: a bound of the mean CI or of the maxima CI"""
    if selector.mode is StatisticMode.MEAN_BASED:
        interval = demand_stats.mean_ci
    else:
        interval = demand_stats.max_ci
    return interval.lower if selector.bound is CiBound.LOWER else interval.upper
