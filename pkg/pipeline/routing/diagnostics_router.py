"""
Post-evolution routing.

Skips analysis when nothing was requested or the evolution failed.
"""

from ..state import PipelineState


def route_after_evolve(state: PipelineState) -> str:
    """
    Determines whether checks run after the evolution.

    Args:
        state: Current pipeline state

    Returns:
        Next node identifier:
        - "analyze": Evolution succeeded and checks are configured
        - "manifest": Evolve-only run, or evolution failed
    """
    if state.get("result") is None:
        return "manifest"
    return "analyze" if state["config"].diagnostics else "manifest"
