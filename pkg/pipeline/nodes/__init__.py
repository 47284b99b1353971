"""
Node implementations for the run pipeline.

Each node represents one stage of a run.
"""

from .derive import derive_node
from .evolve import evolve_node
from .analyze import analyze_node, write_outcome
from .manifest import manifest_node, inventory, MANIFEST_FILE

__all__ = [
    "derive_node",
    "evolve_node",
    "analyze_node",
    "write_outcome",
    "manifest_node",
    "inventory",
    "MANIFEST_FILE",
]
