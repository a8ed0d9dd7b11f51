#!/usr/bin/env python3
"""
Error hierarchy for the spectrum partition backend
Every failure carries the process exit code the CLI reports for it
"""

from typing import Optional


class ExitCodes:
    """Exit codes shared by the error classes and the CLI"""
    SUCCESS = 0
    UNEXPECTED = 1
    USAGE = 2
    CONFIG_NOT_FOUND = 3
    CONFIG_PARSE = 4
    CONFIG_VALIDATION = 5
    MODEL = 6
    IO = 7


class PartitionError(Exception):
    """Base class for every error raised by the backend"""
    exit_code = ExitCodes.MODEL


# Demand model

class InvalidArmaParams(PartitionError):
    """AR polynomial not stationary, or a negative level/stddev"""


class ZeroLength(PartitionError):
    """Requested a trace or ensemble with no samples"""


# Statistics

class EmptyTrace(PartitionError):
    pass


class InsufficientRealizations(PartitionError):
    """Confidence intervals need at least two realizations"""


class InvalidLevel(PartitionError):
    pass


# Allocation and metrics

class NonPositiveStatistic(PartitionError):
    """A driving statistic x <= 0 makes J undefined"""


class InvalidProblem(PartitionError):
    """Pool size or gamma outside its domain"""


class InvalidGrid(PartitionError):
    pass


class AllSamplesZeroDemand(PartitionError):
    pass


class UndefinedFairness(PartitionError):
    """Jain's index of the empty partition (0, 0)"""


# Configuration and output

class ConfigFileNotFound(PartitionError):
    exit_code = ExitCodes.CONFIG_NOT_FOUND


class ConfigParseError(PartitionError):
    exit_code = ExitCodes.CONFIG_PARSE

    def __init__(self, message: str, lineno: Optional[int] = None):
        self.lineno = lineno
        if lineno is not None:
            message = f'line {lineno}: {message}'
        super().__init__(message)


class ConfigValidationError(PartitionError):
    exit_code = ExitCodes.CONFIG_VALIDATION


class ResultsIoError(PartitionError):
    exit_code = ExitCodes.IO
