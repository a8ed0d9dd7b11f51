#!/usr/bin/env python3
"""
Logging setup shared by every backend module
"""

import logging
import sys
from typing import Optional

from decouple import config


class LoggingConfig:
    """Configuration class for log output"""
    LEVEL = config('SPECTRUM_LOG_LEVEL', default='INFO')
    FORMAT = '%(asctime)s %(levelname)-7s %(name)s: %(message)s'
    ROOT_LOGGER = 'spectrum'


_configured = False


def get_logger(name: str) -> logging.Logger:
    """Module logger nested under the project root logger"""
    return logging.getLogger(f'{LoggingConfig.ROOT_LOGGER}.{name}')


def configure_logging(level: Optional[str] = None) -> None:
    """Install a single stderr handler on the project root logger"""
    global _configured
    root = logging.getLogger(LoggingConfig.ROOT_LOGGER)
    root.setLevel((level or LoggingConfig.LEVEL).upper())
    if _configured:
        return
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(LoggingConfig.FORMAT))
    root.addHandler(handler)
    root.propagate = False
    _configured = True
