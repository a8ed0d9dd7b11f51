#!/usr/bin/env python3
"""
Resource pool partition optimizer
Minimizes J = g((N_A - x_A)/x_A)^2 + (1 - g)((N_B - x_B)/x_B)^2 subject to
N_A, N_B >= 0 and N_A + N_B <= N_R, by exhaustive integer search with a
closed-form continuous solution kept as a cross-check
"""

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence, Tuple

import numpy as np

from demand_model import DemandTrace
from exceptions import InvalidGrid, InvalidProblem, NonPositiveStatistic
from logging_config import get_logger
from metrics import (SurplusReport, SweepResult, SweepRow, empirical_surplus,
                     fractional_surplus, jain_fairness)
from stats_engine import StatisticSelector

logger = get_logger(__name__)


class AllocatorConfig:
    """Configuration class for the optimizer and gamma sweeps"""
    GAMMA_STEP = 0.01
    GRID_TOLERANCE = 1e-9


@dataclass(frozen=True)
class AllocationProblem:
    pool_size: int
    gamma: float
    x_a: float
    x_b: float

    def __post_init__(self):
        if self.pool_size < 0 or int(self.pool_size) != self.pool_size:
            raise InvalidProblem(f'pool_size must be a nonnegative integer, got {self.pool_size}')
        if not 0.0 <= self.gamma <= 1.0:
            raise InvalidProblem(f'gamma must lie in [0, 1], got {self.gamma}')
        if not (self.x_a > 0 and self.x_b > 0):
            raise NonPositiveStatistic(f'statistics must be > 0, got x_a={self.x_a}, x_b={self.x_b}')


@dataclass(frozen=True)
class Allocation:
    n_a: int
    n_b: int
    objective: float

    @property
    def total(self) -> int:
        return self.n_a + self.n_b


@dataclass(frozen=True)
class ContinuousAllocation:
    n_a: float
    n_b: float
    objective: float


def evaluate_objective(n_a: float, n_b: float, problem: AllocationProblem) -> float:
    """Point-wise J; the pool constraint is not enforced here"""
    if problem.x_a <= 0 or problem.x_b <= 0:
        raise NonPositiveStatistic(f'statistics must be > 0, got ({problem.x_a}, {problem.x_b})')
    dev_a = (n_a - problem.x_a) / problem.x_a
    dev_b = (n_b - problem.x_b) / problem.x_b
    # Same operation order as the vectorized search so both agree bit for bit
    return problem.gamma * (dev_a * dev_a) + (1.0 - problem.gamma) * (dev_b * dev_b)


@lru_cache(maxsize=256)
def feasible_lattice(pool_size: int) -> Tuple[np.ndarray, np.ndarray]:
    """All (n_a, n_b) with n_a, n_b >= 0 and n_a + n_b <= pool_size"""
    n_a, n_b = np.triu_indices(pool_size + 1)
    # triu gives n_a <= n_b' ; reflect n_b' so that n_a + n_b <= pool_size
    n_b = pool_size - n_b
    n_a.setflags(write=False)
    n_b.setflags(write=False)
    return n_a, n_b


def optimize_partition(problem: AllocationProblem) -> Allocation:
    """Exact minimizer over the feasible lattice with a deterministic tie-break

    Among J-minimal points prefer (1) larger n_a + n_b, (2) larger Jain
    fairness, (3) smaller n_a. For a fixed total, larger fairness is the
    same as a smaller n_a^2 + n_b^2, which keeps the comparison in integers.
    """
    n_a, n_b = feasible_lattice(int(problem.pool_size))
    dev_a = (n_a.astype(np.float64) - problem.x_a) / problem.x_a
    dev_b = (n_b.astype(np.float64) - problem.x_b) / problem.x_b
    objective = problem.gamma * (dev_a * dev_a) + (1.0 - problem.gamma) * (dev_b * dev_b)

    candidates = np.flatnonzero(objective == objective.min())
    if candidates.size > 1:
        ca, cb = n_a[candidates], n_b[candidates]
        order = np.lexsort((ca, ca * ca + cb * cb, -(ca + cb)))
        best = candidates[order[0]]
    else:
        best = candidates[0]
    return Allocation(n_a=int(n_a[best]), n_b=int(n_b[best]), objective=float(objective[best]))


def optimize_partition_continuous(problem: AllocationProblem) -> ContinuousAllocation:
    """Closed-form optimum over real allocations"""
    pool = float(problem.pool_size)
    x_a, x_b, gamma = problem.x_a, problem.x_b, problem.gamma

    if x_a + x_b <= pool:
        return ContinuousAllocation(n_a=x_a, n_b=x_b, objective=0.0)

    # The constraint binds: optimum lies on n_a + n_b = pool
    if gamma == 0.0:
        n_b = min(x_b, pool)
        n_a = min(max(pool - n_b, 0.0), pool)
    elif gamma == 1.0:
        n_a = min(x_a, pool)
        n_b = min(max(pool - n_a, 0.0), pool)
    else:
        weight_a = gamma / (x_a * x_a)
        weight_b = (1.0 - gamma) / (x_b * x_b)
        n_a = (weight_a * x_a + weight_b * (pool - x_b)) / (weight_a + weight_b)
        n_a = min(max(n_a, 0.0), pool)
        n_b = pool - n_a
    return ContinuousAllocation(n_a=n_a, n_b=n_b, objective=evaluate_objective(n_a, n_b, problem))


def gamma_grid(step: float = AllocatorConfig.GAMMA_STEP) -> Tuple[float, ...]:
    """Evenly spaced grid over [0, 1] including both endpoints"""
    if not 0.0 < step <= 1.0:
        raise InvalidGrid(f'gamma step must lie in (0, 1], got {step}')
    n_steps = round(1.0 / step)
    if abs(n_steps * step - 1.0) > AllocatorConfig.GRID_TOLERANCE:
        raise InvalidGrid(f'gamma step {step} does not divide [0, 1] evenly')
    return tuple(i / n_steps for i in range(n_steps + 1))


def _validate_grid(grid: Sequence[float]) -> None:
    if len(grid) == 0:
        raise InvalidGrid('gamma grid is empty')
    if any(not (0.0 <= g <= 1.0) or math.isnan(g) for g in grid):
        raise InvalidGrid('gamma grid values must lie in [0, 1]')
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise InvalidGrid('gamma grid must be strictly increasing')


def _surplus(n: int, x: float, holdout: Optional[DemandTrace]) -> SurplusReport:
    if holdout is None:
        return SurplusReport(deterministic=fractional_surplus(n, x))
    return empirical_surplus(n, holdout, statistic=x)


def sweep_row(pool_size: int, x_pair: Tuple[float, float], gamma: float,
              holdout_a: Optional[DemandTrace] = None,
              holdout_b: Optional[DemandTrace] = None) -> SweepRow:
    x_a, x_b = x_pair
    allocation = optimize_partition(AllocationProblem(pool_size, gamma, x_a, x_b))
    return SweepRow(
        gamma=gamma,
        allocation=allocation,
        surplus_a=_surplus(allocation.n_a, x_a, holdout_a),
        surplus_b=_surplus(allocation.n_b, x_b, holdout_b),
        fairness=jain_fairness(allocation.n_a, allocation.n_b) if allocation.total > 0 else None,
    )


def sweep_gamma(pool_size: int, x_pair: Tuple[float, float], grid: Sequence[float],
                selector: Optional[StatisticSelector] = None,
                holdout_a: Optional[DemandTrace] = None,
                holdout_b: Optional[DemandTrace] = None) -> SweepResult:
    """One optimal allocation plus metrics per grid point, rows ordered by gamma"""
    grid = [float(g) for g in grid]
    _validate_grid(grid)
    rows = tuple(sweep_row(pool_size, x_pair, gamma, holdout_a, holdout_b) for gamma in grid)
    logger.debug(f'✅ Swept {len(rows)} gamma values for pool {pool_size}, x={x_pair}')
    return SweepResult(pool_size=pool_size, x_a=x_pair[0], x_b=x_pair[1],
                       selector=selector, rows=rows)
