"""
Multiplier currents.

Multiplier vector fields and their modifications, bulk quadratic forms
K^V, and fluxes through t* slices and the event horizon.
"""

from .multipliers import (
    Modification,
    MultiplierField,
    MULTIPLIER_BUILDERS,
    build_multiplier,
    first_kind,
    smooth_blend,
    tortoise_expr,
)
from .bulk import (
    QuadraticForm,
    PositivityReport,
    CommutedRegion,
    COMMUTED_CONDITIONS,
    H_NAMES,
    bulk_form,
    positivity_scan,
    commuted_bulk_coefficients,
    commuted_region_radius,
)
from .fluxes import (
    FluxReport,
    direct_flux_density,
    generalt_density,
    modification_flux,
    energy_density_T,
    flux_through_slice,
    flux_series,
    horizon_flux_T,
    rweighted_energy,
    higher_order_energy,
)

__all__ = [
    "Modification",
    "MultiplierField",
    "MULTIPLIER_BUILDERS",
    "build_multiplier",
    "first_kind",
    "smooth_blend",
    "tortoise_expr",
    "QuadraticForm",
    "PositivityReport",
    "CommutedRegion",
    "COMMUTED_CONDITIONS",
    "H_NAMES",
    "bulk_form",
    "positivity_scan",
    "commuted_bulk_coefficients",
    "commuted_region_radius",
    "FluxReport",
    "direct_flux_density",
    "generalt_density",
    "modification_flux",
    "energy_density_T",
    "flux_through_slice",
    "flux_series",
    "horizon_flux_T",
    "rweighted_energy",
    "higher_order_energy",
]
