"""
Manifest node.

Collects the config echo, verdicts, errors and file inventory into
manifest.json.
"""

import json
import logging
from datetime import datetime, timezone
from pathlib import Path

from core import __version__
from ..state import FileEntry, PipelineState, RunManifest
from ..config.run_config import serialize_config
from ..utils.stage_logger import log_stage_result

logger = logging.getLogger(__name__)

MANIFEST_FILE = "manifest.json"


def inventory(directory: Path, written: list[str]) -> list[FileEntry]:
    """
    The files this run wrote, sorted by path relative to directory.

    Files already in directory from earlier runs are not listed, nor is
    the manifest itself.
    """
    directory = Path(directory).resolve()
    entries = {}
    for name in written:
        path = Path(name).resolve()
        if path.is_file() and path.name != MANIFEST_FILE:
            rel = path.relative_to(directory).as_posix()
            entries[rel] = FileEntry(path=rel, size=path.stat().st_size)
    return [entries[rel] for rel in sorted(entries)]


def manifest_node(state: PipelineState) -> dict:
    """
    Write manifest.json for the run.

    Args:
        state: Current pipeline state

    Returns:
        Updated state with manifest
    """
    config = state["config"]
    out = Path(state["output_dir"])
    out.mkdir(parents=True, exist_ok=True)
    manifest = RunManifest(
        config=json.loads(serialize_config(config)),
        version=__version__,
        started_at=state["started_at"],
        finished_at=datetime.now(timezone.utc).isoformat(),
        verdicts=state.get("verdicts", []),
        files=inventory(out, state.get("files", [])),
        errors=state.get("errors", []),
    )
    (out / MANIFEST_FILE).write_text(manifest.model_dump_json(indent=2) + "\n")

    status = "PASS" if manifest.passed else "FAIL"
    logger.info(f"\n{'='*60}")
    log_stage_result("manifest", f"{status}: {len(manifest.verdicts)} verdicts, {len(manifest.files)} files")
    logger.info(f"{'='*60}\n")
    return {"manifest": manifest.model_dump()}
