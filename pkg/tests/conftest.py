"""Shared fixtures for the spectrum partition tests."""

from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from demand_model import ArmaParams, DemandTrace, NetworkId, default_params
from experiment_harness import ScenarioConfig
from stats_engine import CiBound, StatisticMode, StatisticSelector

SCENARIO_DIR = Path(__file__).resolve().parent.parent / 'backend' / 'scenarios'

MEAN_LOWER = StatisticSelector(StatisticMode.MEAN_BASED, CiBound.LOWER)
MEAN_UPPER = StatisticSelector(StatisticMode.MEAN_BASED, CiBound.UPPER)
MAXIMA_LOWER = StatisticSelector(StatisticMode.MAXIMA_BASED, CiBound.LOWER)


def make_trace(values, seed: int = 0, network_id: NetworkId = NetworkId.RAN_A) -> DemandTrace:
    return DemandTrace(values=np.asarray(values, dtype=np.int64), seed=seed, network_id=network_id)


@pytest.fixture
def scenario_file_path() -> Path:
    return SCENARIO_DIR / 'reference_experiment.conf'


@pytest.fixture
def ran_a_params() -> ArmaParams:
    return default_params(NetworkId.RAN_A)


@pytest.fixture
def ran_b_params() -> ArmaParams:
    return default_params(NetworkId.RAN_B)


@pytest.fixture
def constant_config():
    """Zero-variance demand (30 and 50), small ensembles, overridable fields"""
    def build(**overrides) -> ScenarioConfig:
        fields = dict(
            name='constant-demand',
            ran_a=ArmaParams(mean_level=30.0, innovation_stddev=0.0),
            ran_b=ArmaParams(mean_level=50.0, innovation_stddev=0.0),
            pool_sizes=(100,),
            gamma_step=0.5,
            n_realizations=3,
            trace_length=10,
            modes=(MEAN_LOWER,),
            base_seed=11,
        )
        fields.update(overrides)
        return ScenarioConfig(**fields)
    return build
