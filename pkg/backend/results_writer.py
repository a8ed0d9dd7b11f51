#!/usr/bin/env python3
"""
Deterministic result files for downstream plotting
One table per sweep, a statistics table, optional bound-range tables and a
provenance file; identical results give byte-identical tables
"""

import csv
import io
import json
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np

from config_loader import render_config
from exceptions import ResultsIoError
from experiment_harness import ScenarioResult, SweepSummary
from logging_config import get_logger
from metrics import BoundRange, SweepResult

logger = get_logger(__name__)


class ResultsConfig:
    """Configuration class for result file layout"""
    FORMATS = ('csv', 'json')
    SWEEP_COLUMNS = ('gamma', 'n_a', 'n_b', 'objective', 'surplus_a_det', 'surplus_a_emp',
                     'surplus_b_det', 'surplus_b_emp', 'fairness')
    STATISTICS_COLUMNS = ('network', 'n_realizations', 'level', 'mean_lower', 'mean_upper',
                          'variance_lower', 'variance_upper', 'max_lower', 'max_upper')
    RANGE_COLUMNS = ('gamma', 'n_a_min', 'n_a_max', 'n_b_min', 'n_b_max', 'surplus_a_min',
                     'surplus_a_max', 'surplus_b_min', 'surplus_b_max', 'fairness_min',
                     'fairness_max')
    STATISTICS_STEM = 'statistics'
    PROVENANCE_FILE = 'provenance.json'


def _cell(value: Any) -> str:
    """Locale-independent, round-trippable text for one table cell"""
    if value is None:
        return ''
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, np.integer):
        return str(int(value))
    return str(value)


def sweep_rows(sweep: SweepResult) -> List[List[Any]]:
    return [
        [row.gamma, row.allocation.n_a, row.allocation.n_b, row.allocation.objective,
         row.surplus_a.deterministic, row.surplus_a.empirical_mean,
         row.surplus_b.deterministic, row.surplus_b.empirical_mean, row.fairness]
        for row in sweep.rows
    ]


def statistics_rows(result: ScenarioResult) -> List[List[Any]]:
    rows = []
    for network_id, demand_stats in result.demand_statistics.items():
        rows.append([
            network_id.value, demand_stats.n_realizations, demand_stats.mean_ci.level,
            demand_stats.mean_ci.lower, demand_stats.mean_ci.upper,
            demand_stats.variance_ci.lower, demand_stats.variance_ci.upper,
            demand_stats.max_ci.lower, demand_stats.max_ci.upper,
        ])
    return rows


def range_rows(ranges: Sequence[BoundRange]) -> List[List[Any]]:
    return [
        [r.gamma, *r.n_a, *r.n_b, *r.surplus_a, *r.surplus_b, *r.fairness]
        for r in ranges
    ]


def render_table(columns: Sequence[str], rows: Sequence[Sequence[Any]], fmt: str) -> str:
    if fmt == 'json':
        records = [dict(zip(columns, row)) for row in rows]
        return json.dumps(records, indent=2, allow_nan=False) + '\n'
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(columns)
    writer.writerows([[_cell(value) for value in row] for row in rows])
    return buffer.getvalue()


def _summary_record(sweep: SweepResult, summary: SweepSummary) -> Dict[str, Any]:
    starvation = summary.starvation
    return {
        'pool_size': sweep.pool_size,
        'mode': str(sweep.selector),
        'x_a': sweep.x_a,
        'x_b': sweep.x_b,
        'starvation_ran_a': [list(run) for run in starvation.ran_a],
        'starvation_ran_b': [list(run) for run in starvation.ran_b],
        # "both networks starve" read as the union of the per-network ranges
        'starvation_either': [list(run) for run in starvation.either],
        'fairest_gamma': None if summary.fairest is None else summary.fairest[0],
        'fairest_fairness': None if summary.fairest is None else summary.fairest[1],
    }


def provenance_record(result: ScenarioResult) -> Dict[str, Any]:
    return {
        'seed': result.provenance.seed,
        'tool_version': result.provenance.tool_version,
        'timestamp': result.provenance.timestamp,
        'config': render_config(result.config),
        'summaries': [_summary_record(sweep, summary)
                      for sweep, summary in zip(result.sweeps, result.summaries)],
        'run_stats': result.run_stats,
    }


def sweep_file_stem(sweep: SweepResult) -> str:
    label = sweep.selector.label if sweep.selector is not None else 'custom'
    return f'sweep_N{sweep.pool_size}_{label}'


class ResultsWriter:
    """Writes every file of one ScenarioResult into a directory"""

    def __init__(self, output_dir: Union[str, Path], fmt: str = 'csv'):
        if fmt not in ResultsConfig.FORMATS:
            raise ResultsIoError(f'unsupported format {fmt!r}; choose one of {ResultsConfig.FORMATS}')
        self.output_dir = Path(output_dir)
        self.fmt = fmt
        self.written: List[Path] = []

    def _write(self, name: str, text: str) -> Path:
        path = self.output_dir / name
        try:
            with open(path, 'w', encoding='utf-8', newline='') as handle:
                handle.write(text)
        except OSError as exc:
            raise ResultsIoError(f'cannot write {path}: {exc.strerror}') from exc
        self.written.append(path)
        return path

    def write(self, result: ScenarioResult) -> List[Path]:
        try:
            self.output_dir.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise ResultsIoError(f'cannot create {self.output_dir}: {exc.strerror}') from exc

        for sweep in result.sweeps:
            self._write(f'{sweep_file_stem(sweep)}.{self.fmt}',
                        render_table(ResultsConfig.SWEEP_COLUMNS, sweep_rows(sweep), self.fmt))
        self._write(f'{ResultsConfig.STATISTICS_STEM}.{self.fmt}',
                    render_table(ResultsConfig.STATISTICS_COLUMNS, statistics_rows(result), self.fmt))
        for (pool_size, mode), ranges in sorted(result.ranges.items(), key=lambda kv: (kv[0][0], kv[0][1].value)):
            self._write(f'ranges_N{pool_size}_{mode.value}.{self.fmt}',
                        render_table(ResultsConfig.RANGE_COLUMNS, range_rows(ranges), self.fmt))
        self._write(ResultsConfig.PROVENANCE_FILE,
                    json.dumps(provenance_record(result), indent=2, allow_nan=False) + '\n')

        logger.info(f'✅ Wrote {len(self.written)} files to {self.output_dir}')
        return list(self.written)


def write_results(result: ScenarioResult, output_dir: Union[str, Path],
                  fmt: Optional[str] = 'csv') -> List[Path]:
    return ResultsWriter(output_dir, fmt or 'csv').write(result)
