#!/usr/bin/env python3
"""
Scenario runner wiring demand generation, statistics, optimization and metrics
Regenerates the pool-size / gamma experiment for configurable modes and bounds
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Any, Dict, List, Optional, Tuple

from decouple import config

from allocator import AllocatorConfig, gamma_grid, sweep_gamma
from demand_model import (ArmaParams, DemandModelConfig, DemandTrace, NetworkId,
                          default_params, derived_seed, generate_ensemble, generate_trace)
from exceptions import ConfigValidationError, PartitionError
from logging_config import get_logger
from metrics import (BoundRange, StarvationReport, SweepResult, bound_ranges,
                     fairest_gamma, starvation_regions)
from stats_engine import (CiBound, DemandStatistics, StatisticMode, StatisticSelector,
                          StatsConfig, ensemble_confidence_intervals, select_statistic)

logger = get_logger(__name__)


class HarnessConfig:
    """Configuration class for scenario runs"""
    TOOL_VERSION = '0.1.0'
    BASE_SEED = config('SPECTRUM_BASE_SEED', default=20230601, cast=int)
    MAX_WORKERS = config('SPECTRUM_MAX_WORKERS', default=1, cast=int)

    SCENARIO_NAME = 'reference-experiment'
    POOL_SIZES = (20, 60, 100)
    N_REALIZATIONS = 1000
    MODES = (
        StatisticSelector(StatisticMode.MEAN_BASED, CiBound.LOWER),
        StatisticSelector(StatisticMode.MAXIMA_BASED, CiBound.LOWER),
    )

    # Seed tree: derived_seed(base_seed, slot)
    SEED_SLOT_ENSEMBLE_A = 0
    SEED_SLOT_ENSEMBLE_B = 1
    SEED_SLOT_HOLDOUT_A = 2
    SEED_SLOT_HOLDOUT_B = 3


@dataclass(frozen=True)
class ScenarioConfig:
    name: str = HarnessConfig.SCENARIO_NAME
    ran_a: ArmaParams = field(default_factory=lambda: default_params(NetworkId.RAN_A))
    ran_b: ArmaParams = field(default_factory=lambda: default_params(NetworkId.RAN_B))
    pool_sizes: Tuple[int, ...] = HarnessConfig.POOL_SIZES
    gamma_step: float = AllocatorConfig.GAMMA_STEP
    n_realizations: int = HarnessConfig.N_REALIZATIONS
    trace_length: int = DemandModelConfig.TRACE_LENGTH
    confidence_level: float = StatsConfig.DEFAULT_LEVEL
    modes: Tuple[StatisticSelector, ...] = HarnessConfig.MODES
    base_seed: int = HarnessConfig.BASE_SEED

    def validate(self) -> 'ScenarioConfig':
        """Raise ConfigValidationError naming the first violated invariant"""
        if not self.name:
            raise ConfigValidationError('name must be non-empty')
        if not self.pool_sizes:
            raise ConfigValidationError('pool_sizes must be non-empty')
        if any(int(p) != p or p < 0 for p in self.pool_sizes):
            raise ConfigValidationError('pool_sizes must be nonnegative integers')
        if len(set(self.pool_sizes)) != len(self.pool_sizes):
            raise ConfigValidationError('pool_sizes must not repeat')
        if not self.modes:
            raise ConfigValidationError('modes must be non-empty')
        if len(set(self.modes)) != len(self.modes):
            raise ConfigValidationError('modes must not repeat')
        if not 0.0 < self.gamma_step <= 1.0:
            raise ConfigValidationError('gamma_step must lie in (0, 1]')
        try:
            gamma_grid(self.gamma_step)
        except PartitionError as exc:
            raise ConfigValidationError(f'gamma_step must divide [0, 1] into a grid: {exc}') from exc
        if self.n_realizations < 2:
            raise ConfigValidationError('n_realizations must be >= 2 to form confidence intervals')
        if self.trace_length < 1:
            raise ConfigValidationError('trace_length must be >= 1')
        if not 0.0 < self.confidence_level < 1.0:
            raise ConfigValidationError('confidence_level must lie in (0, 1)')
        if not 0 <= self.base_seed < 2 ** 64:
            raise ConfigValidationError('seed must be an unsigned 64-bit integer')
        return self


@dataclass(frozen=True)
class SweepSummary:
    starvation: StarvationReport
    fairest: Optional[Tuple[float, float]]


@dataclass(frozen=True)
class Provenance:
    seed: int
    tool_version: str
    timestamp: str


@dataclass(frozen=True)
class ScenarioResult:
    config: ScenarioConfig
    demand_statistics: Dict[NetworkId, DemandStatistics]
    sweeps: Tuple[SweepResult, ...]
    summaries: Tuple[SweepSummary, ...]
    ranges: Dict[Tuple[int, StatisticMode], List[BoundRange]]
    provenance: Provenance
    run_stats: Dict[str, Any]

    def sweep_for(self, pool_size: int, selector: StatisticSelector) -> SweepResult:
        for sweep in self.sweeps:
            if sweep.pool_size == pool_size and sweep.selector == selector:
                return sweep
        raise KeyError(f'no sweep for pool {pool_size}, mode {selector}')


def _run_sweep(job) -> SweepResult:
    pool_size, x_pair, grid, selector, holdout_a, holdout_b = job
    try:
        return sweep_gamma(pool_size, x_pair, grid, selector, holdout_a, holdout_b)
    except PartitionError as exc:
        exc.add_note(f'while sweeping pool {pool_size} with mode {selector}, x={x_pair}')
        raise


class ScenarioRunner:
    """Runs one scenario end to end and keeps counters for the run"""

    def __init__(self, scenario: ScenarioConfig, max_workers: Optional[int] = None):
        self.config = scenario
        self.max_workers = max_workers if max_workers is not None else HarnessConfig.MAX_WORKERS
        self.run_stats = {
            'traces_generated': 0,
            'sweeps_solved': 0,
            'allocations_solved': 0,
            'lattice_points_evaluated': 0,
        }

    def _seed(self, slot: int) -> int:
        return derived_seed(self.config.base_seed, slot)

    def estimate(self, network_id: NetworkId, params: ArmaParams, slot: int) -> DemandStatistics:
        ensemble = generate_ensemble(params, self.config.trace_length, self.config.n_realizations,
                                     self._seed(slot), network_id, max_workers=self.max_workers)
        self.run_stats['traces_generated'] += len(ensemble)
        demand_stats = ensemble_confidence_intervals(ensemble, self.config.confidence_level)
        logger.info(
            f'✅ {network_id.value}: mean CI [{demand_stats.mean_ci.lower:.4f}, '
            f'{demand_stats.mean_ci.upper:.4f}], variance CI [{demand_stats.variance_ci.lower:.4f}, '
            f'{demand_stats.variance_ci.upper:.4f}], max CI [{demand_stats.max_ci.lower:.4f}, '
            f'{demand_stats.max_ci.upper:.4f}]'
        )
        return demand_stats

    def holdout(self, network_id: NetworkId, params: ArmaParams, slot: int) -> DemandTrace:
        trace = generate_trace(params, self.config.trace_length, self._seed(slot), network_id)
        self.run_stats['traces_generated'] += 1
        return trace

    def run(self) -> ScenarioResult:
        scenario = self.config
        logger.info(f'🔄 Running scenario {scenario.name!r} (seed {scenario.base_seed})')
        try:
            scenario.validate()
            statistics = {
                NetworkId.RAN_A: self.estimate(NetworkId.RAN_A, scenario.ran_a,
                                               HarnessConfig.SEED_SLOT_ENSEMBLE_A),
                NetworkId.RAN_B: self.estimate(NetworkId.RAN_B, scenario.ran_b,
                                               HarnessConfig.SEED_SLOT_ENSEMBLE_B),
            }
            holdout_a = self.holdout(NetworkId.RAN_A, scenario.ran_a, HarnessConfig.SEED_SLOT_HOLDOUT_A)
            holdout_b = self.holdout(NetworkId.RAN_B, scenario.ran_b, HarnessConfig.SEED_SLOT_HOLDOUT_B)

            grid = gamma_grid(scenario.gamma_step)
            jobs = []
            for pool_size in scenario.pool_sizes:
                for selector in scenario.modes:
                    x_pair = (select_statistic(statistics[NetworkId.RAN_A], selector),
                              select_statistic(statistics[NetworkId.RAN_B], selector))
                    jobs.append((int(pool_size), x_pair, grid, selector, holdout_a, holdout_b))

            if self.max_workers > 1 and len(jobs) > 1:
                with ProcessPoolExecutor(max_workers=self.max_workers) as executor:
                    sweeps = tuple(executor.map(_run_sweep, jobs))
            else:
                sweeps = tuple(_run_sweep(job) for job in jobs)
        except PartitionError as exc:
            exc.add_note(f'in scenario {scenario.name!r} (seed {scenario.base_seed})')
            logger.error(f'❌ Scenario {scenario.name!r} failed: {exc}')
            raise

        for sweep in sweeps:
            self.run_stats['sweeps_solved'] += 1
            self.run_stats['allocations_solved'] += len(sweep.rows)
            lattice = (sweep.pool_size + 1) * (sweep.pool_size + 2) // 2
            self.run_stats['lattice_points_evaluated'] += lattice * len(sweep.rows)

        summaries = tuple(
            SweepSummary(starvation=starvation_regions(sweep), fairest=fairest_gamma(sweep))
            for sweep in sweeps
        )
        result = ScenarioResult(
            config=scenario,
            demand_statistics=statistics,
            sweeps=sweeps,
            summaries=summaries,
            ranges=self._bound_ranges(sweeps),
            provenance=Provenance(
                seed=scenario.base_seed,
                tool_version=HarnessConfig.TOOL_VERSION,
                timestamp=datetime.now(timezone.utc).isoformat().replace('+00:00', 'Z'),
            ),
            run_stats=dict(self.run_stats),
        )
        logger.info(
            f"✅ Scenario {scenario.name!r} done: {self.run_stats['sweeps_solved']} sweeps, "
            f"{self.run_stats['allocations_solved']} allocations, "
            f"{self.run_stats['traces_generated']} traces"
        )
        return result

    def _bound_ranges(self, sweeps) -> Dict[Tuple[int, StatisticMode], List[BoundRange]]:
        """Ranges for every (pool, mode) configured with both CI bounds"""
        ranges = {}
        by_key = {(s.pool_size, s.selector): s for s in sweeps}
        for pool_size in self.config.pool_sizes:
            for mode in StatisticMode:
                lower = by_key.get((pool_size, StatisticSelector(mode, CiBound.LOWER)))
                upper = by_key.get((pool_size, StatisticSelector(mode, CiBound.UPPER)))
                if lower is not None and upper is not None:
                    ranges[(int(pool_size), mode)] = bound_ranges(lower, upper)
        return ranges


def run_scenario(scenario: ScenarioConfig) -> ScenarioResult:
    return ScenarioRunner(scenario).run()


def default_scenario_config(base_seed: Optional[int] = None) -> ScenarioConfig:
    """Pools {20, 60, 100}, gamma step 0.01, 1000 realizations, lower CI bounds"""
    return ScenarioConfig(
        base_seed=HarnessConfig.BASE_SEED if base_seed is None else base_seed,
    )


def reproduce_paper_experiment(base_seed: Optional[int] = None) -> ScenarioResult:
    return run_scenario(default_scenario_config(base_seed))
