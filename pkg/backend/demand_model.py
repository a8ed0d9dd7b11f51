#!/usr/bin/env python3
"""
Stochastic demand generation for the two coexisting networks
Each network's per-interval resource demand is an ARMA process around a
mean level, quantized to nonnegative integer resource counts
"""

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import List, Tuple

import numpy as np
from decouple import config
from statsmodels.tsa.arima_process import ArmaProcess

from exceptions import InvalidArmaParams, ZeroLength
from logging_config import get_logger

logger = get_logger(__name__)

MASK_64 = (1 << 64) - 1


class DemandModelConfig:
    """Configuration class for demand generation defaults"""
    AR_COEFF = 0.5
    BURN_IN = 200
    TRACE_LENGTH = 300
    MAX_WORKERS = config('SPECTRUM_MAX_WORKERS', default=1, cast=int)

    # Stationary targets taken from the midpoints of the reported CIs
    RAN_A_MEAN = 30.0
    RAN_A_VARIANCE = 20.46
    RAN_B_MEAN = 50.0
    RAN_B_VARIANCE = 29.74

    # splitmix64 constants
    GOLDEN_GAMMA = 0x9E3779B97F4A7C15
    MIX_1 = 0xBF58476D1CE4E5B9
    MIX_2 = 0x94D049BB133111EB


class NetworkId(str, Enum):
    RAN_A = 'RAN_A'
    RAN_B = 'RAN_B'


@dataclass(frozen=True)
class ArmaParams:
    """Demand process D_t = mean_level + ARMA(p, q) with Gaussian innovations"""
    mean_level: float
    ar_coeffs: Tuple[float, ...] = ()
    ma_coeffs: Tuple[float, ...] = ()
    innovation_stddev: float = 0.0
    burn_in: int = DemandModelConfig.BURN_IN

    def __post_init__(self):
        object.__setattr__(self, 'ar_coeffs', tuple(float(c) for c in self.ar_coeffs))
        object.__setattr__(self, 'ma_coeffs', tuple(float(c) for c in self.ma_coeffs))
        if not math.isfinite(self.mean_level) or self.mean_level < 0:
            raise InvalidArmaParams(f'mean_level must be >= 0, got {self.mean_level}')
        if not math.isfinite(self.innovation_stddev) or self.innovation_stddev < 0:
            raise InvalidArmaParams(f'innovation_stddev must be >= 0, got {self.innovation_stddev}')
        if self.burn_in < 0:
            raise InvalidArmaParams(f'burn_in must be >= 0, got {self.burn_in}')
        if not self.process.isstationary:
            raise InvalidArmaParams(
                f'AR coefficients {list(self.ar_coeffs)} are not stationary '
                '(a root of 1 - sum(phi_i z^i) lies on or inside the unit circle)'
            )

    @property
    def process(self) -> ArmaProcess:
        return ArmaProcess.from_coeffs(arcoefs=list(self.ar_coeffs), macoefs=list(self.ma_coeffs))

    @classmethod
    def from_target_variance(cls, mean_level: float, target_variance: float,
                             ar_coeffs=(DemandModelConfig.AR_COEFF,), ma_coeffs=(),
                             burn_in: int = DemandModelConfig.BURN_IN) -> 'ArmaParams':
        """Pick the innovation stddev that gives the requested stationary variance"""
        if target_variance < 0:
            raise InvalidArmaParams(f'target_variance must be >= 0, got {target_variance}')
        unit = cls(mean_level=mean_level, ar_coeffs=ar_coeffs, ma_coeffs=ma_coeffs,
                   innovation_stddev=1.0, burn_in=burn_in)
        gain = float(unit.process.acovf(nobs=1)[0])
        return cls(mean_level=mean_level, ar_coeffs=ar_coeffs, ma_coeffs=ma_coeffs,
                   innovation_stddev=math.sqrt(target_variance / gain), burn_in=burn_in)


@dataclass(frozen=True, eq=False)
class DemandTrace:
    """One realization of a network's per-interval integer demand"""
    values: np.ndarray
    seed: int
    network_id: NetworkId = NetworkId.RAN_A

    def __len__(self) -> int:
        return len(self.values)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DemandTrace):
            return NotImplemented
        return (self.seed == other.seed and self.network_id == other.network_id
                and np.array_equal(self.values, other.values))

    def __hash__(self) -> int:
        return hash((self.seed, self.network_id, self.values.tobytes()))


def default_params(network_id: NetworkId) -> ArmaParams:
    """AR(1) defaults whose stationary moments match the reported CI midpoints"""
    if NetworkId(network_id) is NetworkId.RAN_A:
        return ArmaParams.from_target_variance(DemandModelConfig.RAN_A_MEAN,
                                               DemandModelConfig.RAN_A_VARIANCE)
    return ArmaParams.from_target_variance(DemandModelConfig.RAN_B_MEAN,
                                           DemandModelConfig.RAN_B_VARIANCE)


def stationary_variance(params: ArmaParams) -> float:
    """Theoretical variance of the unquantized process"""
    gain = float(params.process.acovf(nobs=1)[0])
    return gain * params.innovation_stddev ** 2


def derived_seed(base_seed: int, index: int) -> int:
    """splitmix64 mix of (base_seed, index); independent stream per index"""
    z = (base_seed + (index + 1) * DemandModelConfig.GOLDEN_GAMMA) & MASK_64
    z = ((z ^ (z >> 30)) * DemandModelConfig.MIX_1) & MASK_64
    z = ((z ^ (z >> 27)) * DemandModelConfig.MIX_2) & MASK_64
    return z ^ (z >> 31)


def quantize(raw: np.ndarray) -> np.ndarray:
    """Round half up, then clamp below at zero"""
    return np.maximum(np.floor(raw + 0.5), 0.0).astype(np.int64)


def generate_trace(params: ArmaParams, length: int, seed: int,
                   network_id: NetworkId = NetworkId.RAN_A) -> DemandTrace:
    """Run burn_in + length steps of the process and keep the last `length`"""
    if length < 1:
        raise ZeroLength(f'trace length must be >= 1, got {length}')
    rng = np.random.Generator(np.random.PCG64(seed & MASK_64))
    fluctuation = params.process.generate_sample(
        nsample=length,
        scale=params.innovation_stddev,
        distrvs=rng.standard_normal,
        burnin=params.burn_in,
    )
    values = quantize(params.mean_level + np.asarray(fluctuation, dtype=np.float64))
    values.setflags(write=False)
    return DemandTrace(values=values, seed=seed, network_id=NetworkId(network_id))


def _ensemble_member(args) -> DemandTrace:
    params, length, seed, network_id = args
    return generate_trace(params, length, seed, network_id)


def generate_ensemble(params: ArmaParams, length: int, n_realizations: int, base_seed: int,
                      network_id: NetworkId = NetworkId.RAN_A,
                      max_workers: int = None) -> List[DemandTrace]:
    """n_realizations traces, trace k seeded with derived_seed(base_seed, k)"""
    if n_realizations < 1:
        raise ZeroLength(f'n_realizations must be >= 1, got {n_realizations}')
    if length < 1:
        raise ZeroLength(f'trace length must be >= 1, got {length}')
    workers = max_workers if max_workers is not None else DemandModelConfig.MAX_WORKERS
    jobs = [(params, length, derived_seed(base_seed, k), network_id) for k in range(n_realizations)]

    if workers > 1 and n_realizations > 1:
        # map() keeps submission order, so assembly is independent of scheduling
        with ProcessPoolExecutor(max_workers=workers) as executor:
            traces = list(executor.map(_ensemble_member, jobs, chunksize=64))
    else:
        traces = [_ensemble_member(job) for job in jobs]

    logger.debug(f'🔄 Generated {n_realizations} {NetworkId(network_id).value} traces of length {length}')
    return traces
