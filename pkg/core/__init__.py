# core/__init__.py
"""
Core infrastructure shared by every horizonlab package.
Contains early configuration, logging setup and the exception hierarchy.
"""

from .config import init_config, configure_logging
from .errors import (
    HorizonLabError,
    DomainError,
    UsageError,
    NumericalError,
    StabilityError,
    ConfigError,
    StageError,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "init_config",
    "configure_logging",
    "HorizonLabError",
    "DomainError",
    "UsageError",
    "NumericalError",
    "StabilityError",
    "ConfigError",
    "StageError",
]
