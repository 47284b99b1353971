"""
Configuration module for the pipeline.

Contains process settings, the run configuration model and the check table.
"""

from .settings import HorizonLabSettings, settings, PROJECT_ROOT
from .check_registry import CheckName, CheckSpec, CHECK_REGISTRY
from .run_config import (
    BackgroundConfig,
    GridConfig,
    CheckRequest,
    RunConfig,
    parse_config,
    physical_problems,
    serialize_config,
    config_schema,
)

__all__ = [
    "HorizonLabSettings",
    "settings",
    "PROJECT_ROOT",
    "CheckName",
    "CheckSpec",
    "CHECK_REGISTRY",
    "BackgroundConfig",
    "GridConfig",
    "CheckRequest",
    "RunConfig",
    "parse_config",
    "physical_problems",
    "serialize_config",
    "config_schema",
]
