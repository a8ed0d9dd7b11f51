#!/usr/bin/env python3
"""
Command-line front end for the spectrum partition backend

Subcommands:
    run              run the scenario in --config, write result tables
    reproduce        run the built-in default experiment, write result tables
    validate-config  parse and validate --config only
    sweep-single     solve one (pool, gamma, x_a, x_b) problem and print it
"""

import argparse
import sys
from dataclasses import dataclass
from typing import List, Optional

from decouple import config

from allocator import AllocationProblem, optimize_partition
from config_loader import parse_config, with_seed
from exceptions import ExitCodes, PartitionError
from experiment_harness import default_scenario_config, run_scenario
from logging_config import configure_logging, get_logger
from results_writer import ResultsConfig, write_results

logger = get_logger(__name__)


class CliConfig:
    """Configuration class for the command line"""
    OUTPUT_DIR = config('SPECTRUM_OUTPUT_DIR', default='results')
    DEFAULT_FORMAT = config('SPECTRUM_DEFAULT_FORMAT', default='csv')
    PROG = 'spectrum-partition'

    SUCCESS_STATUS = ExitCodes.SUCCESS
    UNEXPECTED_STATUS = ExitCodes.UNEXPECTED


@dataclass(frozen=True)
class CliInvocation:
    subcommand: str
    config_path: Optional[str] = None
    output_dir: str = CliConfig.OUTPUT_DIR
    seed_override: Optional[int] = None
    format: str = CliConfig.DEFAULT_FORMAT
    pool: Optional[int] = None
    gamma: Optional[float] = None
    x_a: Optional[float] = None
    x_b: Optional[float] = None
    log_level: Optional[str] = None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog=CliConfig.PROG,
                                     description='Weighted partition of a shared resource pool')
    parser.add_argument('--log-level', default=None, help='DEBUG, INFO, WARNING, ...')
    subparsers = parser.add_subparsers(dest='subcommand', required=True)

    def add_output_options(sub):
        sub.add_argument('--output-dir', default=CliConfig.OUTPUT_DIR)
        sub.add_argument('--seed', type=int, default=None, dest='seed_override',
                         help='overrides the seed from the config')
        sub.add_argument('--format', choices=ResultsConfig.FORMATS, default=CliConfig.DEFAULT_FORMAT)

    run = subparsers.add_parser('run', help='run a scenario file')
    run.add_argument('--config', required=True, dest='config_path')
    add_output_options(run)

    reproduce = subparsers.add_parser('reproduce', help="run the default three-pool experiment")
    add_output_options(reproduce)

    validate = subparsers.add_parser('validate-config', help='parse and validate a scenario file')
    validate.add_argument('--config', required=True, dest='config_path')

    single = subparsers.add_parser('sweep-single', help='solve one allocation problem')
    single.add_argument('--pool', type=int, required=True)
    single.add_argument('--gamma', type=float, required=True)
    single.add_argument('--x-a', type=float, required=True, dest='x_a')
    single.add_argument('--x-b', type=float, required=True, dest='x_b')
    return parser


def parse_invocation(argv: Optional[List[str]] = None) -> CliInvocation:
    """argparse exits with status 2 on usage errors"""
    parser = build_parser()
    namespace = vars(parser.parse_args(argv))
    # argparse does not check defaults against choices
    if 'format' in namespace and namespace['format'] not in ResultsConfig.FORMATS:
        parser.error(f"invalid format {namespace['format']!r} (from SPECTRUM_DEFAULT_FORMAT); "
                     f'choose one of {ResultsConfig.FORMATS}')
    known = {name: value for name, value in namespace.items()
             if name in CliInvocation.__dataclass_fields__ and value is not None}
    return CliInvocation(**known)


class PartitionCommandHandler:
    """Dispatches subcommands and maps failures to exit codes"""

    def handle_run(self, invocation: CliInvocation) -> int:
        scenario = with_seed(parse_config(invocation.config_path), invocation.seed_override)
        result = run_scenario(scenario)
        write_results(result, invocation.output_dir, invocation.format)
        return CliConfig.SUCCESS_STATUS

    def handle_reproduce(self, invocation: CliInvocation) -> int:
        result = run_scenario(default_scenario_config(invocation.seed_override))
        write_results(result, invocation.output_dir, invocation.format)
        return CliConfig.SUCCESS_STATUS

    def handle_validate_config(self, invocation: CliInvocation) -> int:
        scenario = parse_config(invocation.config_path)
        logger.info(f'✅ {invocation.config_path} is valid (scenario {scenario.name!r})')
        return CliConfig.SUCCESS_STATUS

    def handle_sweep_single(self, invocation: CliInvocation) -> int:
        problem = AllocationProblem(pool_size=invocation.pool, gamma=invocation.gamma,
                                    x_a=invocation.x_a, x_b=invocation.x_b)
        allocation = optimize_partition(problem)
        print(f'{allocation.n_a} {allocation.n_b} {allocation.objective!r}')
        return CliConfig.SUCCESS_STATUS

    def dispatch(self, invocation: CliInvocation) -> int:
        handlers = {
            'run': self.handle_run,
            'reproduce': self.handle_reproduce,
            'validate-config': self.handle_validate_config,
            'sweep-single': self.handle_sweep_single,
        }
        try:
            return handlers[invocation.subcommand](invocation)
        except PartitionError as exc:
            return self._handle_error(exc, exc.exit_code)
        except Exception as exc:
            return self._handle_error(exc, CliConfig.UNEXPECTED_STATUS)

    def _handle_error(self, error: Exception, status: int) -> int:
        """One-line diagnostic on stderr"""
        message = str(error).splitlines()[0] if str(error) else type(error).__name__
        print(f'{CliConfig.PROG}: error: {type(error).__name__}: {message}', file=sys.stderr)
        for note in getattr(error, '__notes__', ()):
            logger.debug(f'❌ {note}')
        return status


def run_invocation(invocation: CliInvocation) -> int:
    """Exit status for an already parsed invocation"""
    configure_logging(invocation.log_level)
    return PartitionCommandHandler().dispatch(invocation)


def main(argv: Optional[List[str]] = None) -> int:
    return run_invocation(parse_invocation(argv))


if __name__ == '__main__':
    sys.exit(main())
