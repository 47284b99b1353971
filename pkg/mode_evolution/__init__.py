"""
Horizon-penetrating evolution of single angular modes.

The (t*, r) first-order system, RK4 integration, horizon jet extraction,
refinement studies and run persistence.
"""

from .grid import RadialGrid, ModeField
from .initial_data import InitialDataSpec, build_initial_field, check_outer_decay
from .stencils import fd_weights, derivative_matrix, dissipation_matrix
from .system import (
    WaveSystem,
    SliceDerivatives,
    principal_speeds,
    reduced_equation_residual,
    differenced_residual,
)
from .horizon_jet import HorizonJetOperator
from .integrator import (
    EvolutionConfig,
    EvolutionResult,
    HorizonTrace,
    step,
    evolve,
)
from .convergence import ConvergenceReport, DiagnosticOrders, convergence_study, observed_orders
from .storage import (
    write_run,
    load_run,
    write_snapshot,
    read_snapshot,
    write_trace,
    write_boundary_flux,
    write_series,
)

__all__ = [
    "RadialGrid",
    "ModeField",
    "InitialDataSpec",
    "build_initial_field",
    "check_outer_decay",
    "fd_weights",
    "derivative_matrix",
    "dissipation_matrix",
    "WaveSystem",
    "SliceDerivatives",
    "principal_speeds",
    "reduced_equation_residual",
    "differenced_residual",
    "HorizonJetOperator",
    "EvolutionConfig",
    "EvolutionResult",
    "HorizonTrace",
    "step",
    "evolve",
    "ConvergenceReport",
    "DiagnosticOrders",
    "convergence_study",
    "observed_orders",
    "write_run",
    "load_run",
    "write_snapshot",
    "read_snapshot",
    "write_trace",
    "write_boundary_flux",
    "write_series",
]
