"""
Extremality-based routing.

The horizon conservation law exists on the extreme background only.
"""

from ..state import PipelineState


def route_by_extremality(state: PipelineState) -> str:
    """
    Determines whether the run starts by deriving the conservation law.

    Args:
        state: Current pipeline state

    Returns:
        Next node identifier:
        - "derive": Extreme background, derive H_l first
        - "evolve": Subextreme background, go straight to the evolution
    """
    return "derive" if state["config"].background.charge_ratio == 1.0 else "evolve"
