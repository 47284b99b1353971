"""
Utility modules for the pipeline.

Contains stage logging, check runners and gnuplot output.
"""

from .stage_logger import log_stage_start, log_stage_result, log_stage_error
from .checks import CheckOutcome, CHECK_RUNNERS, run_check
from .plots import write_gnuplot

__all__ = [
    "log_stage_start",
    "log_stage_result",
    "log_stage_error",
    "CheckOutcome",
    "CHECK_RUNNERS",
    "run_check",
    "write_gnuplot",
]
