"""
State schema for the run pipeline.

Defines the data structure that flows through the LangGraph workflow.
"""

import operator
from typing import Annotated, TypedDict

from pydantic import BaseModel, Field

from mode_evolution import EvolutionResult

from .config.run_config import RunConfig


class PipelineState(TypedDict, total=False):
    """
    State for one run.

    Attributes:
        config: Validated run configuration
        output_dir: Directory receiving every artifact
        started_at: ISO timestamp of the run start
        law: Conservation law as a dict (extreme backgrounds only)
        result: Evolution output, None after a failed evolve
        verdicts: Check verdicts, accumulated
        files: Paths written, accumulated
        processing_steps: Log of processing steps for transparency
        errors: Stage failures as {stage, message}
        manifest: Final manifest
    """
    config: RunConfig
    output_dir: str
    started_at: str
    law: dict | None
    result: EvolutionResult | None
    verdicts: Annotated[list[dict], operator.add]
    files: Annotated[list[str], operator.add]
    processing_steps: Annotated[list[str], operator.add]
    errors: Annotated[list[dict], operator.add]
    manifest: dict


class FileEntry(BaseModel):
    path: str
    size: int


class RunManifest(BaseModel):
    """
    Record of a finished run.

    Only files written by this run are listed, never leftovers of an
    earlier run in the same directory. Timestamps appear only here,
    never in data files.
    """

    config: dict
    version: str
    started_at: str
    finished_at: str
    verdicts: list[dict] = Field(default_factory=list)
    files: list[FileEntry] = Field(default_factory=list)
    errors: list[dict] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.errors and all(v["pass"] for v in self.verdicts)
