"""
Post-processing of evolution output.

Horizon series and power-law fits, conservation-law drift, blow-up
slopes, Hardy/Poincare checks and energy time series.
"""

from .series import HorizonSeries, RateFit, fit_power_law, late_window
from .aretakis import (
    AretakisSeries,
    aretakis_series,
    blowup_slope,
    expected_blowup_exponent,
    horizon_derivative_series,
    is_generic,
    relative_drift,
    require_generic,
)
from .inequalities import (
    InequalityResult,
    PoincareResult,
    hardy_check,
    poincare_check,
    third_hardy_weight,
)
from .energy import EnergyBalance, EnergyTimeseries, energy_balance, energy_timeseries

__all__ = [
    "HorizonSeries",
    "RateFit",
    "fit_power_law",
    "late_window",
    "AretakisSeries",
    "aretakis_series",
    "blowup_slope",
    "expected_blowup_exponent",
    "horizon_derivative_series",
    "is_generic",
    "relative_drift",
    "require_generic",
    "InequalityResult",
    "PoincareResult",
    "hardy_check",
    "poincare_check",
    "third_hardy_weight",
    "EnergyBalance",
    "EnergyTimeseries",
    "energy_balance",
    "energy_timeseries",
]
