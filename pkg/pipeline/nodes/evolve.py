"""
Evolve node.

Builds the background, grid and initial data from the run config, evolves
the mode and writes snapshots, horizon trace and boundary fluxes.
"""

import logging
from pathlib import Path

from mode_evolution import evolve, write_run
from ..state import PipelineState
from ..config import settings
from ..utils.plots import write_gnuplot
from ..utils.stage_logger import log_stage_start, log_stage_result, log_stage_error

logger = logging.getLogger(__name__)


def evolve_node(state: PipelineState) -> dict:
    """
    Run the evolution described by the config.

    Args:
        state: Current pipeline state

    Returns:
        Updated state with result and written files; on failure result is
        None and the error is recorded under stage "evolve"
    """
    config = state["config"]
    out = Path(state["output_dir"])
    log_stage_start("evolve", {
        "charge_ratio": config.background.charge_ratio,
        "l": config.l,
        "n_points": config.grid.n_points,
        "t_final": config.evolution.t_final,
    })
    try:
        bg = config.background.build()
        grid = config.grid.build(bg)
        result = evolve(bg, config.initial_data, config.evolution, grid=grid, l=config.l)
        files = [str(p) for p in write_run(result, out)]

        if settings.plot_data:
            trace = result.trace
            columns = {"tstar": trace.times}
            for k in range(trace.max_order + 1):
                columns[f"dr{k}"] = trace.jets[k]
            if trace.h_values is not None:
                columns[f"H_{config.l}"] = trace.h_values
            files += [str(p) for p in write_gnuplot(out / "plots", "horizon_trace", columns, "Horizon trace", logscale=True)]

        log_stage_result("evolve", f"{result.n_steps} steps, {len(result.snapshots)} snapshots")
        return {
            "result": result,
            "files": files,
            "processing_steps": [f"evolve: {result.n_steps} steps of dt={result.dt:.4g}"],
        }
    except Exception as e:
        log_stage_error("evolve", e)
        return {"result": None, "errors": [{"stage": "evolve", "message": str(e)}]}
