# core/config.py
"""
Early process configuration.

Handles environment variable loading and logging setup that must happen
before settings objects are read or any run starts.
"""

import logging

from dotenv import load_dotenv

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

_initialized = False


def init_config() -> None:
    """
    Load environment variables from a local .env file.

    Safe to call more than once; only the first call reads the file.
    Call it before importing settings so HORIZONLAB_* overrides apply.
    """
    global _initialized
    if _initialized:
        return
    load_dotenv()
    _initialized = True


def configure_logging(level: str = "INFO") -> None:
    """
    Configure root logging with the project-wide format.

    Args:
        level: Logging level name (DEBUG, INFO, WARNING, ERROR)

    Raises:
        ValueError: If the level name is not a logging level
    """
    numeric = getattr(logging, level.upper(), None)
    if not isinstance(numeric, int):
        raise ValueError(
            f"Invalid log level: {level}. "
            f"Must be one of: DEBUG, INFO, WARNING, ERROR"
        )
    logging.basicConfig(level=numeric, format=LOG_FORMAT, force=True)
    # library warnings.warn calls go to the py.warnings logger
    logging.captureWarnings(True)
