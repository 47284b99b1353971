"""
Stage logging utilities.

Provides consistent logging for every pipeline stage and check.
"""

import logging

logger = logging.getLogger(__name__)


def log_stage_start(stage: str, params: dict) -> None:
    """
    Log when a stage starts.

    Args:
        stage: Stage or check name
        params: Parameters the stage runs with
    """
    logger.info(f"🔧 Running stage: {stage}")
    logger.info(f"   Parameters: {params}")


def log_stage_result(stage: str, summary: str, truncate: int = 200) -> None:
    """
    Log the outcome of a stage.

    Args:
        stage: Stage or check name
        summary: One-line summary of the result
        truncate: Maximum length for the summary preview (default 200)
    """
    preview = summary[:truncate] + "..." if len(summary) > truncate else summary
    logger.info(f"✅ Stage {stage}: {preview}")


def log_stage_error(stage: str, error: Exception) -> None:
    """
    Log when a stage fails.

    Args:
        stage: Stage or check name
        error: Exception that was raised
    """
    logger.error(f"❌ Stage {stage} failed: {type(error).__name__}: {error}")
