#!/usr/bin/env python3
"""
Scenario configuration files
INI grammar with [scenario], [ran_a] and [ran_b] sections; see README.md
"""

import configparser
import dataclasses
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple, Union

from demand_model import ArmaParams, NetworkId, default_params
from exceptions import (ConfigFileNotFound, ConfigParseError, ConfigValidationError,
                        PartitionError)
from experiment_harness import ScenarioConfig
from logging_config import get_logger
from stats_engine import StatisticSelector

logger = get_logger(__name__)


class ConfigLoaderConfig:
    """Configuration class for the scenario file grammar"""
    SCENARIO_SECTION = 'scenario'
    NETWORK_SECTIONS = {'ran_a': NetworkId.RAN_A, 'ran_b': NetworkId.RAN_B}
    SCENARIO_KEYS = ('name', 'seed', 'pool_sizes', 'gamma_step', 'n_realizations',
                     'trace_length', 'confidence_level', 'modes')
    NETWORK_KEYS = ('mean_level', 'ar_coeffs', 'ma_coeffs', 'innovation_stddev',
                    'target_variance', 'burn_in')
    HEADER = '# spectrum-partition scenario file'


def _split_list(text: str) -> List[str]:
    text = text.strip()
    if text.startswith('[') and text.endswith(']'):
        text = text[1:-1]
    return [item.strip() for item in text.split(',') if item.strip()]


def _int_list(text: str) -> Tuple[int, ...]:
    return tuple(int(item) for item in _split_list(text))


def _float_list(text: str) -> Tuple[float, ...]:
    return tuple(float(item) for item in _split_list(text))


def _modes(text: str) -> Tuple[StatisticSelector, ...]:
    return tuple(StatisticSelector.parse(item) for item in _split_list(text))


SCENARIO_FIELDS: Dict[str, Tuple[str, Callable]] = {
    'name': ('name', str.strip),
    'seed': ('base_seed', int),
    'pool_sizes': ('pool_sizes', _int_list),
    'gamma_step': ('gamma_step', float),
    'n_realizations': ('n_realizations', int),
    'trace_length': ('trace_length', int),
    'confidence_level': ('confidence_level', float),
    'modes': ('modes', _modes),
}

NETWORK_FIELDS: Dict[str, Callable] = {
    'mean_level': float,
    'ar_coeffs': _float_list,
    'ma_coeffs': _float_list,
    'innovation_stddev': float,
    'target_variance': float,
    'burn_in': int,
}


class ScenarioFileParser:
    """Turns one scenario file into a validated ScenarioConfig"""

    def __init__(self, path: Union[str, Path]):
        self.path = Path(path)
        self.lines: List[str] = []

    def _line_of(self, section: str, key: Optional[str] = None) -> Optional[int]:
        """1-based line of a section header, or of a key inside that section"""
        current = None
        for lineno, raw in enumerate(self.lines, start=1):
            line = raw.strip()
            if line.startswith('[') and line.endswith(']'):
                current = line[1:-1].strip().lower()
                if key is None and current == section:
                    return lineno
                continue
            if key is not None and current == section:
                name = line.split('=', 1)[0].split(':', 1)[0].strip().lower()
                if name == key:
                    return lineno
        return None

    def _read(self) -> configparser.ConfigParser:
        try:
            text = self.path.read_text(encoding='utf-8')
        except FileNotFoundError as exc:
            raise ConfigFileNotFound(f'config file not found: {self.path}') from exc
        except OSError as exc:
            raise ConfigFileNotFound(f'cannot read config file {self.path}: {exc.strerror}') from exc
        self.lines = text.splitlines()

        parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=('#', ';'))
        try:
            parser.read_string(text, source=str(self.path))
        except configparser.MissingSectionHeaderError as exc:
            raise ConfigParseError('expected a [section] header before any key', exc.lineno) from exc
        except (configparser.DuplicateSectionError, configparser.DuplicateOptionError) as exc:
            raise ConfigParseError(exc.message.splitlines()[-1], exc.lineno) from exc
        except configparser.ParsingError as exc:
            lineno, line = exc.errors[0]
            raise ConfigParseError(f'cannot parse {line.strip()!r}', lineno) from exc
        except configparser.Error as exc:
            raise ConfigParseError(str(exc)) from exc
        return parser

    def _convert(self, section: str, key: str, raw: str, convert: Callable):
        try:
            return convert(raw)
        except (ValueError, TypeError) as exc:
            raise ConfigParseError(f'invalid value {raw!r} for {key}: {exc}',
                                   self._line_of(section, key)) from exc

    def _check_keys(self, parser: configparser.ConfigParser) -> None:
        known_sections = {ConfigLoaderConfig.SCENARIO_SECTION, *ConfigLoaderConfig.NETWORK_SECTIONS}
        for section in parser.sections():
            if section not in known_sections:
                raise ConfigParseError(f'unknown section [{section}]', self._line_of(section))
            allowed = (ConfigLoaderConfig.SCENARIO_KEYS if section == ConfigLoaderConfig.SCENARIO_SECTION
                       else ConfigLoaderConfig.NETWORK_KEYS)
            for key in parser[section]:
                if key not in allowed:
                    raise ConfigParseError(f'unknown key {key!r} in [{section}]',
                                           self._line_of(section, key))

    def _network(self, parser: configparser.ConfigParser, section: str) -> ArmaParams:
        defaults = default_params(ConfigLoaderConfig.NETWORK_SECTIONS[section])
        if not parser.has_section(section):
            return defaults
        values = {key: self._convert(section, key, raw, NETWORK_FIELDS[key])
                  for key, raw in parser[section].items()}
        if 'target_variance' in values and 'innovation_stddev' in values:
            raise ConfigValidationError(
                f'[{section}] sets both target_variance and innovation_stddev; pick one'
            )
        fields = {
            'mean_level': values.get('mean_level', defaults.mean_level),
            'ar_coeffs': values.get('ar_coeffs', defaults.ar_coeffs),
            'ma_coeffs': values.get('ma_coeffs', defaults.ma_coeffs),
            'burn_in': values.get('burn_in', defaults.burn_in),
        }
        try:
            if 'target_variance' in values:
                return ArmaParams.from_target_variance(target_variance=values['target_variance'], **fields)
            return ArmaParams(innovation_stddev=values.get('innovation_stddev', defaults.innovation_stddev),
                              **fields)
        except PartitionError as exc:
            raise ConfigValidationError(f'[{section}] {exc}') from exc

    def parse(self) -> ScenarioConfig:
        parser = self._read()
        self._check_keys(parser)

        overrides = {}
        section = ConfigLoaderConfig.SCENARIO_SECTION
        if parser.has_section(section):
            for key, raw in parser[section].items():
                field_name, convert = SCENARIO_FIELDS[key]
                overrides[field_name] = self._convert(section, key, raw, convert)
        overrides['ran_a'] = self._network(parser, 'ran_a')
        overrides['ran_b'] = self._network(parser, 'ran_b')

        scenario = ScenarioConfig(**overrides).validate()
        logger.debug(f'✅ Loaded scenario {scenario.name!r} from {self.path}')
        return scenario


def parse_config(path: Union[str, Path]) -> ScenarioConfig:
    return ScenarioFileParser(path).parse()


def _floats(values) -> str:
    return ', '.join(repr(float(v)) for v in values)


def render_config(scenario: ScenarioConfig) -> str:
    """Scenario file text that parses back to an equal ScenarioConfig"""
    lines = [
        ConfigLoaderConfig.HEADER,
        f'[{ConfigLoaderConfig.SCENARIO_SECTION}]',
        f'name = {scenario.name}',
        f'seed = {scenario.base_seed}',
        f"pool_sizes = {', '.join(str(p) for p in scenario.pool_sizes)}",
        f'gamma_step = {scenario.gamma_step!r}',
        f'n_realizations = {scenario.n_realizations}',
        f'trace_length = {scenario.trace_length}',
        f'confidence_level = {scenario.confidence_level!r}',
        f"modes = {', '.join(str(mode) for mode in scenario.modes)}",
    ]
    for section, params in (('ran_a', scenario.ran_a), ('ran_b', scenario.ran_b)):
        lines += [
            '',
            f'[{section}]',
            f'mean_level = {float(params.mean_level)!r}',
            f'ar_coeffs = {_floats(params.ar_coeffs)}',
            f'ma_coeffs = {_floats(params.ma_coeffs)}',
            f'innovation_stddev = {float(params.innovation_stddev)!r}',
            f'burn_in = {params.burn_in}',
        ]
    return '\n'.join(lines) + '\n'


def with_seed(scenario: ScenarioConfig, seed: Optional[int]) -> ScenarioConfig:
    """Apply a command-line seed override"""
    if seed is None:
        return scenario
    return dataclasses.replace(scenario, base_seed=seed).validate()
