"""
Run pipeline graph.

START -> (extreme?) derive -> evolve -> (checks?) analyze -> manifest -> END
"""

import logging
from datetime import datetime, timezone
from pathlib import Path

from langgraph.graph import StateGraph, START, END

from .state import PipelineState, RunManifest
from .config.run_config import RunConfig
from .nodes import derive_node, evolve_node, analyze_node, manifest_node
from .routing import route_by_extremality, route_after_evolve

logger = logging.getLogger(__name__)


def build_pipeline():
    """
    Build and compile the run pipeline.

    Returns:
        Compiled LangGraph workflow
    """
    workflow = StateGraph(PipelineState)

    workflow.add_node("derive", derive_node)
    workflow.add_node("evolve", evolve_node)
    workflow.add_node("analyze", analyze_node)
    workflow.add_node("manifest", manifest_node)

    # Step 1: derive the law only where it exists
    workflow.add_conditional_edges(
        START,
        route_by_extremality,
        {
            "derive": "derive",
            "evolve": "evolve",
        }
    )
    workflow.add_edge("derive", "evolve")

    # Step 2: analyze unless evolve-only or failed
    workflow.add_conditional_edges(
        "evolve",
        route_after_evolve,
        {
            "analyze": "analyze",
            "manifest": "manifest",
        }
    )
    workflow.add_edge("analyze", "manifest")
    workflow.add_edge("manifest", END)

    return workflow.compile()


def run_pipeline(config: RunConfig, output_dir: str | Path | None = None) -> RunManifest:
    """
    Execute a full run.

    Args:
        config: Validated run configuration
        output_dir: Overrides config.output_dir

    Returns:
        RunManifest; stage failures are recorded in its errors
    """
    out = Path(output_dir if output_dir is not None else config.output_dir)
    logger.info(f"\n{'='*60}")
    logger.info(f"🚀 RUN {out}")
    logger.info(f"{'='*60}\n")

    graph = build_pipeline()
    final = graph.invoke({
        "config": config,
        "output_dir": str(out),
        "started_at": datetime.now(timezone.utc).isoformat(),
        "verdicts": [],
        "files": [],
        "processing_steps": [],
        "errors": [],
    })
    for step in final.get("processing_steps", []):
        logger.info(f"   {step}")
    return RunManifest(**final["manifest"])
