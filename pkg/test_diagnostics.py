# test_diagnostics.py
"""
Power-law fits, horizon quantities, inequalities and energy budgets.
"""

import math
from dataclasses import replace

import numpy as np
import pytest

from core.errors import DomainError, UsageError
from diagnostics import (
    HorizonSeries,
    aretakis_series,
    blowup_slope,
    energy_balance,
    energy_timeseries,
    expected_blowup_exponent,
    fit_power_law,
    hardy_check,
    late_window,
    poincare_check,
    relative_drift,
    require_generic,
    third_hardy_weight,
)
from horizon_calculus import derive_conservation_law
from mode_evolution import HorizonTrace, ModeField, build_initial_field


def synthetic_trace(h_values=None, c=2.0):
    """l = 0 trace with psi = 1/t, d_r psi = c - 1/t and d_r^2 psi = t, so H_0 = c."""
    t = np.linspace(1.0, 100.0, 400)
    jets = np.vstack([1.0 / t, c - 1.0 / t, t])
    zeros = np.zeros_like(t)
    return HorizonTrace(
        times=t,
        jets=jets,
        h_values=np.full_like(t, c) if h_values is None else h_values,
        horizon_pi=zeros,
        horizon_flux_density=zeros,
        outer_flux_density=zeros,
        r_horizon=1.0,
        l=0,
    )


# ============================================================================
# Series and fits
# ============================================================================

def test_late_window():
    assert late_window(200.0) == (100.0, 180.0)


def test_series_validation():
    with pytest.raises(UsageError):
        HorizonSeries([1.0, 2.0], [1.0])
    with pytest.raises(UsageError, match="strictly increasing"):
        HorizonSeries([1.0, 1.0, 2.0], [1.0, 2.0, 3.0])


def test_power_law_fit_is_exact():
    t = np.linspace(1.0, 200.0, 500)
    fit = fit_power_law(HorizonSeries(t, 3.0 * t**-2))
    assert fit.exponent == pytest.approx(-2.0, abs=1e-10)
    assert fit.intercept == pytest.approx(math.log(3.0), abs=1e-9)
    assert fit.residual < 1e-10
    assert not fit.split
    assert fit.window[0] >= 100.0 and fit.window[1] <= 180.0


def test_sign_change_reports_segments():
    t = np.linspace(1.0, 100.0, 1000)
    y = np.where(t < 70.0, 1.0, -1.0) / t
    with pytest.warns(RuntimeWarning, match="changes sign"):
        fit = fit_power_law(HorizonSeries(t, y, "psi"), (50.0, 90.0))
    assert fit.split
    assert len(fit.segments) == 2
    assert fit.exponent == pytest.approx(-1.0, abs=1e-9)
    assert "segments" in fit.to_dict()


def test_fit_window_errors():
    t = np.linspace(1.0, 10.0, 20)
    series = HorizonSeries(t, t**-1)
    with pytest.raises(UsageError, match="does not overlap"):
        fit_power_law(series, (20.0, 30.0))
    with pytest.raises(UsageError, match="non-zero samples"):
        fit_power_law(series, (1.0, 1.5))
    with pytest.raises(UsageError, match="empty"):
        fit_power_law(HorizonSeries([], []))


# ============================================================================
# Horizon quantities
# ============================================================================

def test_relative_drift():
    assert relative_drift(np.array([2.0, 2.1, 1.9])) == pytest.approx(0.05)
    assert relative_drift(np.array([])) == 0.0
    assert relative_drift(np.zeros(4)) == 0.0


def test_require_generic():
    require_generic(1e-3, 1.0, 0)
    with pytest.raises(DomainError, match="non-generic"):
        require_generic(1e-10, 1.0, 0)


def test_expected_exponents():
    assert expected_blowup_exponent(0, 1) == 0
    assert expected_blowup_exponent(0, 2) == 1
    assert expected_blowup_exponent(1, 4) == 2


def test_aretakis_series_of_synthetic_trace():
    series = aretakis_series(synthetic_trace(), derive_conservation_law(0), mass=1.0)
    np.testing.assert_allclose(series.values, 2.0, atol=1e-12)
    assert series.drift < 1e-12
    assert series.label == "H_0"
    with pytest.raises(UsageError):
        aretakis_series(synthetic_trace(), derive_conservation_law(1), mass=1.0)


def test_aretakis_series_uses_background_mass():
    # subextreme-like trace: r_plus differs from M
    trace = replace(synthetic_trace(), r_horizon=1.6)
    law = derive_conservation_law(0)
    series = aretakis_series(trace, law, mass=1.0)
    np.testing.assert_allclose(series.values, trace.jets[1] + trace.jets[0], atol=1e-12)
    heavier = aretakis_series(trace, law, mass=2.0)
    np.testing.assert_allclose(heavier.values, trace.jets[1] + trace.jets[0] / 2.0, atol=1e-12)
    with pytest.raises(TypeError):
        aretakis_series(trace, law)
    with pytest.raises(UsageError, match="background mass"):
        blowup_slope(trace, 0, 2, law=law)


def test_blowup_slope_of_synthetic_trace():
    trace = synthetic_trace()
    fit = blowup_slope(trace, 0, 2)
    assert fit.exponent == pytest.approx(expected_blowup_exponent(0, 2), abs=1e-10)
    with pytest.raises(UsageError, match="k >= l\\+1"):
        blowup_slope(trace, 0, 0)
    with pytest.raises(UsageError, match="trace_order"):
        blowup_slope(trace, 0, 3)


def test_blowup_slope_needs_generic_data():
    trace = synthetic_trace(h_values=np.zeros(400))
    with pytest.raises(DomainError):
        blowup_slope(trace, 0, 2)


def test_conserved_quantity_on_evolved_run(small_run):
    series = aretakis_series(small_run.trace, small_run.law, mass=1.0)
    assert series.drift < 0.05
    np.testing.assert_allclose(series.values, small_run.trace.h_values)


# ============================================================================
# Inequalities
# ============================================================================

def test_first_hardy_closed_form(extreme):
    rho = np.linspace(1.0, 41.0, 80_001)
    psi = np.exp(-(rho - 1.0))
    fld = ModeField(l=0, r=rho, psi=psi, pi=np.zeros_like(rho), phi_r=-psi)
    result = hardy_check(extreme, fld, "first")
    assert result.lhs == pytest.approx(0.5, rel=1e-6)
    assert result.rhs == pytest.approx(1.0, rel=1e-6)
    assert result.ratio == pytest.approx(0.5, abs=1e-6)
    assert result.holds


def test_first_hardy_warns_on_undecayed_data(extreme, small_grid):
    r = small_grid.nodes
    fld = ModeField(l=0, r=r, psi=np.ones_like(r), pi=np.zeros_like(r), phi_r=np.zeros_like(r))
    with pytest.warns(RuntimeWarning, match="outer boundary term"):
        hardy_check(extreme, fld, "first")


@pytest.mark.parametrize("which", ["first", "second", "third"])
def test_hardy_inequalities_hold_on_bump(extreme, small_grid, bump, which):
    fld = build_initial_field(extreme, small_grid, bump, 0)
    assert hardy_check(extreme, fld, which).holds


def test_hardy_argument_errors(extreme, small_grid, bump):
    fld = build_initial_field(extreme, small_grid, bump, 0)
    with pytest.raises(UsageError, match="Invalid inequality"):
        hardy_check(extreme, fld, "fourth")
    with pytest.raises(UsageError):
        hardy_check(extreme, fld, "second", epsilon=0.0)
    with pytest.raises(DomainError):
        hardy_check(extreme, fld, "third", r0=1.8, r1=1.6)


def test_third_hardy_weight():
    rho = np.array([1.0, 1.25, 1.5, 1.625, 1.75])
    h, dh = third_hardy_weight(rho, 1.0, 1.5, 1.75)
    np.testing.assert_allclose(h, [0.0, 0.5, 1.0, 0.5, 0.0])
    np.testing.assert_allclose(dh, [2.0, 2.0, 2.0, -4.0, -4.0])


def test_poincare(extreme, small_grid, bump):
    modes = [build_initial_field(extreme, small_grid, bump, l) for l in (1, 2)]
    result = poincare_check(modes, 1)
    assert result.holds
    assert result.lhs < result.rhs
    with pytest.raises(UsageError, match="lies below"):
        poincare_check(modes, 2)
    with pytest.raises(UsageError):
        poincare_check([], 0)


# ============================================================================
# Energy
# ============================================================================

def test_energy_balance_of_run(small_run):
    balance = energy_balance(small_run)
    assert balance.initial > balance.final > 0
    assert balance.horizon_flux >= 0
    assert balance.residual < 0.02
    assert balance.to_dict()["window"] == [0.0, small_run.final.time]


def test_energy_timeseries_of_run(small_run):
    series = energy_timeseries(small_run, "T")
    assert len(series.series) == len(small_run.snapshots)
    assert series.series.label == "E_T"
    assert np.all(series.series.values > 0)


def test_energy_timeseries_on_region(small_run):
    near = energy_timeseries(small_run, "N", region=(1.0, 1.125))
    assert near.region == (1.0, 1.125)
    assert np.all(near.series.values >= 0)
