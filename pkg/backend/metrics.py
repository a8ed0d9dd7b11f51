#!/usr/bin/env python3
"""
Evaluation metrics for a resource pool partition
Fractional surplus/deficit, Jain's fairness index and starvation regions
over a gamma sweep
"""

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, List, Optional, Sequence, Tuple

import numpy as np

from demand_model import DemandTrace
from exceptions import (AllSamplesZeroDemand, EmptyTrace, InvalidGrid,
                        NonPositiveStatistic, UndefinedFairness)
from stats_engine import StatisticSelector

if TYPE_CHECKING:
    from allocator import Allocation

GammaInterval = Tuple[float, float]


@dataclass(frozen=True)
class SurplusReport:
    """(N - x)/x at the driving statistic, and averaged over demand samples"""
    deterministic: float
    empirical_mean: Optional[float] = None
    skipped_zero_demand: int = 0


@dataclass(frozen=True)
class SweepRow:
    gamma: float
    allocation: 'Allocation'
    surplus_a: SurplusReport
    surplus_b: SurplusReport
    fairness: Optional[float]


@dataclass(frozen=True)
class SweepResult:
    pool_size: int
    x_a: float
    x_b: float
    selector: Optional[StatisticSelector] = None
    rows: Tuple[SweepRow, ...] = field(default_factory=tuple)

    @property
    def gammas(self) -> List[float]:
        return [row.gamma for row in self.rows]


@dataclass(frozen=True)
class StarvationReport:
    """Maximal gamma runs with a zero allocation, at grid resolution"""
    ran_a: Tuple[GammaInterval, ...]
    ran_b: Tuple[GammaInterval, ...]
    either: Tuple[GammaInterval, ...]


@dataclass(frozen=True)
class BoundRange:
    """Per-gamma spread between the lower-bound and upper-bound sweeps"""
    gamma: float
    n_a: Tuple[int, int]
    n_b: Tuple[int, int]
    surplus_a: Tuple[float, float]
    surplus_b: Tuple[float, float]
    fairness: Tuple[Optional[float], Optional[float]]


def fractional_surplus(n: float, x: float) -> float:
    if x <= 0:
        raise NonPositiveStatistic(f'statistic must be > 0, got {x}')
    return (n - x) / x


def empirical_surplus(n: int, trace: DemandTrace, statistic: Optional[float] = None) -> SurplusReport:
    """Average of (n - D_t)/D_t over samples with D_t >= 1

    The deterministic field is filled from `statistic` when given, otherwise
    it is left at NaN for the caller to fill.
    """
    demand = np.asarray(trace.values, dtype=np.float64)
    if demand.size == 0:
        raise EmptyTrace('cannot compute surplus against an empty trace')
    served = demand[demand >= 1]
    if served.size == 0:
        raise AllSamplesZeroDemand(f'all {demand.size} demand samples are zero')
    deterministic = fractional_surplus(n, statistic) if statistic is not None else float('nan')
    return SurplusReport(
        deterministic=deterministic,
        empirical_mean=float(np.mean((n - served) / served)),
        skipped_zero_demand=int(demand.size - served.size),
    )


def jain_fairness(n_a: int, n_b: int) -> float:
    total = n_a + n_b
    if total <= 0:
        raise UndefinedFairness('fairness is undefined for the empty partition (0, 0)')
    return total * total / (2 * (n_a * n_a + n_b * n_b))


def _zero_runs(gammas: Sequence[float], starved: Sequence[bool]) -> Tuple[GammaInterval, ...]:
    runs = []
    start = None
    for i, flag in enumerate(starved):
        if flag and start is None:
            start = i
        if not flag and start is not None:
            runs.append((gammas[start], gammas[i - 1]))
            start = None
    if start is not None:
        runs.append((gammas[start], gammas[-1]))
    return tuple(runs)


def starvation_regions(sweep: SweepResult) -> StarvationReport:
    gammas = sweep.gammas
    starved_a = [row.allocation.n_a == 0 for row in sweep.rows]
    starved_b = [row.allocation.n_b == 0 for row in sweep.rows]
    return StarvationReport(
        ran_a=_zero_runs(gammas, starved_a),
        ran_b=_zero_runs(gammas, starved_b),
        either=_zero_runs(gammas, [a or b for a, b in zip(starved_a, starved_b)]),
    )


def starved_gammas(intervals: Sequence[GammaInterval], gammas: Sequence[float]) -> List[float]:
    """Grid points covered by a list of closed gamma intervals"""
    return [g for g in gammas if any(lo <= g <= hi for lo, hi in intervals)]


def fairest_gamma(sweep: SweepResult) -> Optional[Tuple[float, float]]:
    """First grid point of maximal fairness; None if no row has a defined index"""
    best = None
    for row in sweep.rows:
        if row.fairness is not None and (best is None or row.fairness > best[1]):
            best = (row.gamma, row.fairness)
    return best


def _span(a, b):
    if a is None or b is None:
        return (a if b is None else b, b if a is None else a)
    return (min(a, b), max(a, b))


def bound_ranges(lower: SweepResult, upper: SweepResult) -> List[BoundRange]:
    """Ranges of allocation, surplus and fairness across the two CI bounds"""
    if lower.pool_size != upper.pool_size or lower.gammas != upper.gammas:
        raise InvalidGrid('bound ranges need two sweeps over the same pool and gamma grid')
    ranges = []
    for low, high in zip(lower.rows, upper.rows):
        ranges.append(BoundRange(
            gamma=low.gamma,
            n_a=_span(low.allocation.n_a, high.allocation.n_a),
            n_b=_span(low.allocation.n_b, high.allocation.n_b),
            surplus_a=_span(low.surplus_a.deterministic, high.surplus_a.deterministic),
            surplus_b=_span(low.surplus_b.deterministic, high.surplus_b.deterministic),
            fairness=_span(low.fairness, high.fairness),
        ))
    return ranges
