"""
Routing logic for the run pipeline.

Conditional edge functions that determine workflow paths.
"""

from .extremality_router import route_by_extremality
from .diagnostics_router import route_after_evolve

__all__ = [
    "route_by_extremality",
    "route_after_evolve",
]
