"""
Analyze node.

Runs every requested check concurrently and writes one JSON verdict and
one companion CSV per check.
"""

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from mode_evolution import EvolutionResult, write_series
from ..state import PipelineState
from ..config import settings
from ..config.run_config import CheckRequest
from ..utils.checks import CheckOutcome, run_check
from ..utils.plots import write_gnuplot
from ..utils.stage_logger import log_stage_start, log_stage_result, log_stage_error

logger = logging.getLogger(__name__)


def write_outcome(outcome: CheckOutcome, out: Path) -> list[str]:
    """Write <check>.json, the companion CSV and, if enabled, its plot files."""
    out.mkdir(parents=True, exist_ok=True)
    verdict_path = out / f"{outcome.check}.json"
    verdict_path.write_text(json.dumps(outcome.verdict(), indent=2, sort_keys=True) + "\n")
    files = [str(verdict_path)]
    if outcome.columns:
        files.append(str(write_series(out / f"{outcome.check}.csv", outcome.columns)))
        if settings.plot_data:
            files += [
                str(p) for p in write_gnuplot(out / "plots", outcome.check, outcome.columns, outcome.check)
            ]
    return files


def _run_one(request: CheckRequest, result: EvolutionResult, out: Path) -> tuple[dict, list[str], dict | None]:
    try:
        outcome = run_check(request.name, result, request.params)
        return outcome.verdict(), write_outcome(outcome, out), None
    except Exception as e:
        log_stage_error(request.name, e)
        verdict = {
            "check": request.name,
            "pass": False,
            "measured": None,
            "expected": "check completed",
            "tolerance": None,
            "error": str(e),
        }
        return verdict, [], {"stage": f"analyze:{request.name}", "message": str(e)}


def analyze_node(state: PipelineState) -> dict:
    """
    Run the configured checks on the evolution result.

    Args:
        state: Current pipeline state

    Returns:
        Updated state with verdicts (sorted by check name) and files
    """
    config = state["config"]
    result = state["result"]
    out = Path(state["output_dir"])
    requests = config.diagnostics

    logger.info(f"\n{'='*60}")
    logger.info(f"🔍 ANALYZE")
    logger.info(f"{'='*60}")
    logger.info(f"   Checks: {', '.join(config.check_names)}")
    logger.info(f"   Threads: {settings.threads}")
    logger.info(f"{'='*60}\n")
    log_stage_start("analyze", {"checks": config.check_names})

    with ThreadPoolExecutor(max_workers=max(1, settings.threads)) as pool:
        outcomes = list(pool.map(lambda req: _run_one(req, result, out), requests))

    verdicts = sorted((o[0] for o in outcomes), key=lambda v: v["check"])
    files = [f for o in outcomes for f in o[1]]
    errors = [o[2] for o in outcomes if o[2] is not None]
    passed = sum(v["pass"] for v in verdicts)
    log_stage_result("analyze", f"{passed}/{len(verdicts)} checks passed")
    return {
        "verdicts": verdicts,
        "files": files,
        "errors": errors,
        "processing_steps": [f"analyze: {passed}/{len(verdicts)} passed"],
    }
