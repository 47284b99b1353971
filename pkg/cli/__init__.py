"""
Command-line front end (console script ``horizonlab``).
"""

from .main import main, build_parser

__all__ = ["main", "build_parser"]
