"""Tests for metrics.py: surplus, Jain fairness, starvation and bound ranges."""

from __future__ import annotations

import pytest

from allocator import Allocation, gamma_grid, sweep_gamma
from conftest import make_trace
from exceptions import (AllSamplesZeroDemand, EmptyTrace, InvalidGrid, NonPositiveStatistic,
                        UndefinedFairness)
from metrics import (SurplusReport, SweepResult, SweepRow, bound_ranges, empirical_surplus,
                     fairest_gamma, fractional_surplus, jain_fairness, starvation_regions,
                     starved_gammas)


def manual_sweep(allocations, gammas, pool_size=20):
    rows = tuple(
        SweepRow(gamma=g, allocation=Allocation(a, b, 0.0),
                 surplus_a=SurplusReport(0.0), surplus_b=SurplusReport(0.0),
                 fairness=jain_fairness(a, b) if a + b else None)
        for g, (a, b) in zip(gammas, allocations)
    )
    return SweepResult(pool_size=pool_size, x_a=30.0, x_b=50.0, rows=rows)


# ═══════════════════════════════════════════════════════════════════════════
# Surplus / deficit
# ═══════════════════════════════════════════════════════════════════════════

class TestFractionalSurplus:

    @pytest.mark.parametrize('n, x, expected', [
        (30, 30.0, 0.0), (14, 30.0, -16 / 30), (6, 50.0, -0.88), (60, 30.0, 1.0), (0, 12.0, -1.0),
    ])
    def test_values(self, n, x, expected):
        assert fractional_surplus(n, x) == pytest.approx(expected)

    @pytest.mark.parametrize('x', [0.0, -3.0])
    def test_non_positive_statistic(self, x):
        with pytest.raises(NonPositiveStatistic):
            fractional_surplus(10, x)


class TestEmpiricalSurplus:

    def test_averages_over_samples(self):
        report = empirical_surplus(20, make_trace([10, 20, 40]))
        assert report.empirical_mean == pytest.approx((1.0 + 0.0 - 0.5) / 3)
        assert report.skipped_zero_demand == 0

    def test_skips_zero_demand(self):
        report = empirical_surplus(10, make_trace([0, 5, 0, 10]), statistic=5.0)
        assert report.empirical_mean == pytest.approx((1.0 + 0.0) / 2)
        assert report.skipped_zero_demand == 2
        assert report.deterministic == pytest.approx(1.0)

    def test_constant_trace_matches_deterministic(self):
        report = empirical_surplus(14, make_trace([30] * 25), statistic=30.0)
        assert report.empirical_mean == pytest.approx(report.deterministic)

    def test_all_zero_demand(self):
        with pytest.raises(AllSamplesZeroDemand):
            empirical_surplus(5, make_trace([0, 0, 0]))

    def test_empty_trace(self):
        with pytest.raises(EmptyTrace):
            empirical_surplus(5, make_trace([]))


# ═══════════════════════════════════════════════════════════════════════════
# Jain's fairness index
# ═══════════════════════════════════════════════════════════════════════════

class TestJainFairness:

    @pytest.mark.parametrize('n_a, n_b, expected', [
        (10, 10, 1.0), (20, 0, 0.5), (0, 7, 0.5), (14, 6, 400 / 464), (30, 50, 6400 / 6800),
    ])
    def test_values(self, n_a, n_b, expected):
        assert jain_fairness(n_a, n_b) == pytest.approx(expected)

    def test_undefined_for_empty_partition(self):
        with pytest.raises(UndefinedFairness):
            jain_fairness(0, 0)

    def test_bounds_and_symmetry(self):
        for n_a in range(201):
            for n_b in range(201):
                if n_a == 0 and n_b == 0:
                    continue
                value = jain_fairness(n_a, n_b)
                assert 0.5 <= value <= 1.0
                assert value == jain_fairness(n_b, n_a)
                assert (value == 1.0) == (n_a == n_b)


# ═══════════════════════════════════════════════════════════════════════════
# Starvation regions
# ═══════════════════════════════════════════════════════════════════════════

class TestStarvation:

    def test_prefix_run(self):
        sweep = manual_sweep([(0, 20), (0, 20), (3, 17), (8, 12)], [0.0, 0.01, 0.02, 0.03])
        report = starvation_regions(sweep)
        assert report.ran_a == ((0.0, 0.01),)
        assert report.ran_b == ()
        assert report.either == ((0.0, 0.01),)

    def test_no_starvation(self):
        sweep = manual_sweep([(5, 15), (10, 10)], [0.2, 0.8])
        report = starvation_regions(sweep)
        assert report == type(report)((), (), ())

    def test_union_joins_adjacent_runs(self):
        sweep = manual_sweep([(0, 20), (20, 0), (10, 10), (20, 0)], [0.0, 0.5, 0.7, 1.0])
        report = starvation_regions(sweep)
        assert report.ran_a == ((0.0, 0.0),)
        assert report.ran_b == ((0.5, 0.5), (1.0, 1.0))
        assert report.either == ((0.0, 0.5), (1.0, 1.0))

    def test_constrained_sweep_has_prefix_and_suffix(self):
        report = starvation_regions(sweep_gamma(20, (30.0, 50.0), gamma_grid(0.01)))
        assert len(report.ran_a) == 1 and len(report.ran_b) == 1
        (a_start, a_end), (b_start, b_end) = report.ran_a[0], report.ran_b[0]
        assert a_start == 0.0 and b_end == 1.0
        assert a_end < b_start

    def test_maxima_starvation_contains_mean_starvation(self):
        grid = gamma_grid(0.01)
        mean = starvation_regions(sweep_gamma(20, (30.0, 50.0), grid))
        maxima = starvation_regions(sweep_gamma(20, (43.0, 62.0), grid))
        assert set(starved_gammas(mean.either, grid)) <= set(starved_gammas(maxima.either, grid))
        assert len(starved_gammas(maxima.either, grid)) > len(starved_gammas(mean.either, grid))

    def test_starved_gammas(self):
        assert starved_gammas(((0.0, 0.2), (0.9, 1.0)), [0.0, 0.1, 0.2, 0.5, 0.9, 1.0]) == \
            [0.0, 0.1, 0.2, 0.9, 1.0]


# ═══════════════════════════════════════════════════════════════════════════
# Sweep summaries
# ═══════════════════════════════════════════════════════════════════════════

class TestOverProvisioning:

    def test_maxima_allocation_exceeds_mean_demand(self):
        sweep = sweep_gamma(100, (43.0, 62.0), gamma_grid(0.01))
        for row in sweep.rows:
            if 0.3 <= row.gamma <= 0.7:
                assert fractional_surplus(row.allocation.n_a, 30.0) > 0
                assert fractional_surplus(row.allocation.n_b, 50.0) > 0
                assert 38 <= row.allocation.n_a <= 43
                assert 57 <= row.allocation.n_b <= 62


class TestFairestGamma:

    def test_first_maximum(self):
        sweep = manual_sweep([(2, 18), (10, 10), (10, 10)], [0.1, 0.5, 0.9])
        assert fairest_gamma(sweep) == (0.5, 1.0)

    def test_pool_sixty_mean_based(self):
        gamma, fairness = fairest_gamma(sweep_gamma(60, (30.0, 50.0), gamma_grid(0.01)))
        assert fairness == 1.0
        assert 0.9 <= gamma <= 1.0

    def test_all_undefined(self):
        sweep = manual_sweep([(0, 0)], [0.5], pool_size=0)
        assert fairest_gamma(sweep) is None


class TestBoundRanges:

    def test_ranges_span_both_sweeps(self):
        grid = gamma_grid(0.1)
        lower = sweep_gamma(20, (29.96, 49.60), grid)
        upper = sweep_gamma(20, (30.03, 50.36), grid)
        ranges = bound_ranges(lower, upper)
        assert [r.gamma for r in ranges] == list(grid)
        for r, low, high in zip(ranges, lower.rows, upper.rows):
            assert r.n_a == (min(low.allocation.n_a, high.allocation.n_a),
                             max(low.allocation.n_a, high.allocation.n_a))
            assert r.surplus_a[0] <= r.surplus_a[1]
            assert r.fairness[0] <= r.fairness[1]

    def test_mismatched_grids(self):
        lower = sweep_gamma(20, (30.0, 50.0), gamma_grid(0.1))
        upper = sweep_gamma(20, (30.0, 50.0), gamma_grid(0.5))
        with pytest.raises(InvalidGrid):
            bound_ranges(lower, upper)

    def test_mismatched_pools(self):
        lower = sweep_gamma(20, (30.0, 50.0), gamma_grid(0.5))
        upper = sweep_gamma(60, (30.0, 50.0), gamma_grid(0.5))
        with pytest.raises(InvalidGrid):
            bound_ranges(lower, upper)
