"""
Process-level settings.

Read from environment variables (and a .env file loaded by the CLI).
"""

from pathlib import Path
from pydantic_settings import BaseSettings


# Project root directory
PROJECT_ROOT = Path(__file__).parent.parent.parent


class HorizonLabSettings(BaseSettings):
    """
    Settings shared by every run of the process.

    All settings can be overridden via environment variables
    with the HORIZONLAB_ prefix (e.g., HORIZONLAB_THREADS).
    """

    # Concurrency cap for analyze checks and convergence studies
    threads: int = 4

    # Logging
    log_level: str = "INFO"

    # Output
    output_root: str = "runs"
    plot_data: bool = True

    class Config:
        env_prefix = "HORIZONLAB_"
        case_sensitive = False


# Global settings instance
settings = HorizonLabSettings()
