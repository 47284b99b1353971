"""
Run pipeline.

LangGraph orchestration of derive -> evolve -> analyze -> manifest with
the run configuration and check table.
"""

from .graph import build_pipeline, run_pipeline
from .state import PipelineState, RunManifest, FileEntry
from .config import settings, RunConfig, parse_config, serialize_config, CHECK_REGISTRY

__all__ = [
    "build_pipeline",
    "run_pipeline",
    "PipelineState",
    "RunManifest",
    "FileEntry",
    "settings",
    "RunConfig",
    "parse_config",
    "serialize_config",
    "CHECK_REGISTRY",
]
