"""
Derive node.

Derives the horizon conservation law of the run's mode.
"""

import json
import logging
from pathlib import Path

from horizon_calculus import derive_conservation_law, format_law_table
from ..state import PipelineState
from ..utils.stage_logger import log_stage_start, log_stage_result, log_stage_error

logger = logging.getLogger(__name__)

LAW_FILE = "conservation_law.json"


def derive_node(state: PipelineState) -> dict:
    """
    Derive H_l and write it next to the run output.

    Args:
        state: Current pipeline state

    Returns:
        Updated state with law and the written file
    """
    config = state["config"]
    out = Path(state["output_dir"])
    log_stage_start("derive", {"l": config.l})
    try:
        law = derive_conservation_law(config.l)
        payload = law.to_dict(config.background.mass)
        out.mkdir(parents=True, exist_ok=True)
        path = out / LAW_FILE
        path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
        log_stage_result("derive", format_law_table(law, config.background.mass).splitlines()[0])
        return {
            "law": payload,
            "files": [str(path)],
            "processing_steps": [f"derive: H_{config.l} with {len(law.betas)} coefficients"],
        }
    except Exception as e:
        log_stage_error("derive", e)
        return {"law": None, "errors": [{"stage": "derive", "message": str(e)}]}
