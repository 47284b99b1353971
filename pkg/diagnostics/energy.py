# diagnostics/energy.py
"""
Energy time series and the discrete T-energy balance.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy.integrate import trapezoid

from core.errors import UsageError
from currents import build_multiplier, energy_density_T, flux_series, horizon_flux_T
from mode_evolution import EvolutionResult

from .series import HorizonSeries, RateFit, fit_power_law, late_window

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class EnergyTimeseries:
    """Slice flux of one multiplier per snapshot, with a late-window fit."""

    multiplier: str
    region: tuple[float, float] | None
    commutations: int
    series: HorizonSeries
    fit: RateFit | None


def energy_timeseries(
    result: EvolutionResult,
    multiplier: str = "T",
    region: tuple[float, float] | None = None,
    commutations: int = 0,
    window: tuple[float, float] | None = None,
    **multiplier_params,
) -> EnergyTimeseries:
    """
    Flux of a multiplier through every stored slice plus a power-law fit.

    The fit is None when the series vanishes identically in the window.

    Args:
        result: Evolution output
        multiplier: Registered multiplier name
        region: r-segment, default the whole grid
        commutations: Number of d_r commutations
        window: Fit window, default the late window
        **multiplier_params: Passed to the multiplier builder
    """
    V = build_multiplier(result.bg, multiplier, **multiplier_params)
    times, values = flux_series(result.bg, V, result.snapshots, region, commutations)
    series = HorizonSeries(times, values, label=f"E_{multiplier}")
    window = late_window(float(times[-1])) if window is None else window
    inside = series.window(*window)
    fit = None
    if np.count_nonzero(inside.values) >= 3:
        fit = fit_power_law(series, window)
        logger.info(f"📉 {multiplier}-energy exponent {fit.exponent:.3f} over {window}")
    return EnergyTimeseries(multiplier, region, commutations, series, fit)


@dataclass(frozen=True)
class EnergyBalance:
    """
    T-energy budget between the first and last stored slices.

    E(0) = E(t) + horizon_flux + outer_flux, both fluxes counted as losses.
    """

    initial: float
    final: float
    horizon_flux: float
    outer_flux: float
    t_start: float
    t_end: float

    @property
    def residual(self) -> float:
        missing = self.initial - (self.final + self.horizon_flux + self.outer_flux)
        return abs(missing) / self.initial if self.initial > 0 else abs(missing)

    def to_dict(self) -> dict:
        return {
            "initial": self.initial,
            "final": self.final,
            "horizon_flux": self.horizon_flux,
            "outer_flux": self.outer_flux,
            "residual": self.residual,
            "window": [self.t_start, self.t_end],
        }


def energy_balance(result: EvolutionResult) -> EnergyBalance:
    """
    Discrete T-energy balance of a run.

    Raises:
        UsageError: Fewer than two snapshots
    """
    if len(result.snapshots) < 2:
        raise UsageError("energy balance needs at least two snapshots")
    bg = result.bg
    first, last = result.initial_field, result.final
    e0 = float(trapezoid(energy_density_T(bg, first), first.r))
    e1 = float(trapezoid(energy_density_T(bg, last), last.r))

    trace = result.trace
    window = (first.time, last.time)
    horizon = horizon_flux_T(trace, window)
    keep = (trace.times >= window[0]) & (trace.times <= window[1])
    outer = -float(trapezoid(trace.outer_flux_density[keep], trace.times[keep]))

    balance = EnergyBalance(e0, e1, horizon, outer, window[0], window[1])
    logger.info(
        f"⚖️ T-energy: E0={e0:.6e}, E1={e1:.6e}, horizon={horizon:.6e}, "
        f"outer={outer:.6e}, residual={balance.residual:.2e}"
    )
    return balance

