# test_currents.py
"""
Multipliers, bulk quadratic forms and slice fluxes.
"""

import dataclasses

import numpy as np
import pytest
from scipy.integrate import trapezoid

from core.errors import DomainError, UsageError
from currents import (
    build_multiplier,
    bulk_form,
    commuted_region_radius,
    direct_flux_density,
    energy_density_T,
    flux_series,
    flux_through_slice,
    generalt_density,
    higher_order_energy,
    horizon_flux_T,
    positivity_scan,
    rweighted_energy,
)
from geometry import metric_potential


def smooth_profile(r):
    """A mode-like profile with its two derivatives, all non-trivial."""
    psi = np.exp(-((r - 2.0) ** 2))
    return psi, np.sin(r) * psi, -2.0 * (r - 2.0) * psi


# ============================================================================
# Multiplier registry
# ============================================================================

def test_unknown_multiplier(extreme):
    with pytest.raises(UsageError, match="Invalid multiplier"):
        build_multiplier(extreme, "Y")


@pytest.mark.parametrize("name", ["P", "L"])
def test_extreme_only_multipliers(subextreme, name):
    with pytest.raises(DomainError, match="extreme background only"):
        build_multiplier(subextreme, name)


def test_x_alpha_parameters(extreme):
    with pytest.raises(UsageError):
        build_multiplier(extreme, "X_alpha", alpha=0.0)
    with pytest.raises(UsageError, match="Invalid kind"):
        build_multiplier(extreme, "X_alpha", kind="third_kind")


def test_x_alpha_excludes_horizon(extreme):
    V = build_multiplier(extreme, "X_alpha", alpha=2.0)
    with pytest.raises(DomainError):
        V.evaluate(1.0)
    with pytest.raises(DomainError):
        bulk_form(extreme, V, [1.0, 1.5])
    assert np.all(np.isfinite(V.evaluate([1.001, 3.0])["f_r"]))


def test_n_is_future_causal(extreme):
    N = build_multiplier(extreme, "N")
    assert N.is_future_causal(np.linspace(1.0, 20.0, 2000))


# ============================================================================
# Bulk terms
# ============================================================================

def test_stationary_field_has_no_bulk(extreme, subextreme):
    for bg in (extreme, subextreme):
        T = build_multiplier(bg, "T")
        assert bulk_form(bg, T, np.linspace(bg.r_plus, 10.0, 50), l=3).is_zero()


@pytest.mark.parametrize("r", [1.5, 2.0, 4.0, 12.0])
def test_x0_bulk_in_tortoise_chart(extreme, r):
    X0 = build_multiplier(extreme, "X_0")
    form = bulk_form(extreme, X0, r, chart="t_rstar")
    assert form["tt"][0] == pytest.approx(0.5 / r**4, rel=1e-10)
    assert form["ss"][0] == pytest.approx(2.5 / r**4, rel=1e-10)
    assert form["ts"][0] == pytest.approx(0.0, abs=1e-12)


def test_tortoise_chart_excludes_horizon(extreme):
    X0 = build_multiplier(extreme, "X_0")
    with pytest.raises(DomainError, match="does not cover the horizon"):
        bulk_form(extreme, X0, [1.0, 2.0], chart="t_rstar")


def test_bulk_argument_errors(extreme):
    T = build_multiplier(extreme, "T")
    with pytest.raises(UsageError, match="Invalid chart"):
        bulk_form(extreme, T, 2.0, chart="u_v")
    with pytest.raises(UsageError):
        bulk_form(extreme, T, 2.0, l=-1)
    with pytest.raises(UsageError, match="Invalid coefficient"):
        bulk_form(extreme, T, 2.0)["tt"]


def test_lagrangian_bulk(extreme):
    lag = build_multiplier(extreme, "lagrangian")
    r = np.linspace(1.0, 8.0, 30)
    form = bulk_form(extreme, lag, r)
    g = (1.0 - 1.0 / r) ** 3 / r**3
    np.testing.assert_allclose(form["vv"], 0.0, atol=1e-15)
    np.testing.assert_allclose(form["vr"], 2.0 * g, rtol=1e-12, atol=1e-15)
    np.testing.assert_allclose(form["rr"], g * metric_potential(extreme, r), rtol=1e-12, atol=1e-15)


def test_redshift_multiplier_positive_near_horizon(extreme):
    N_mod = build_multiplier(extreme, "N_mod")
    report = positivity_scan(extreme, N_mod, (1.0, 1.125), samples=10_000)
    assert report.passed
    assert report.verdict().startswith("PASS")
    assert report.min_eigenvalue == pytest.approx(0.0, abs=1e-12)
    assert report.witness_radius == 1.0
    assert report.min_angular > 0

    form = bulk_form(extreme, N_mod, 1.0)
    assert form["vv"][0] == pytest.approx(16.0)
    assert form["vr"][0] == pytest.approx(0.0, abs=1e-14)
    assert form["rr"][0] == 0.0


def test_positivity_scan_reports_failure(extreme):
    L = build_multiplier(extreme, "L")
    report = positivity_scan(extreme, L, (1.0, 1.01), samples=500, l=0, commuted=True)
    assert not report.passed
    assert report.verdict().startswith("FAIL")
    assert report.chart == "commuted"
    assert report.min_eigenvalue < 0
    assert report.min_angular is None
    with pytest.raises(UsageError):
        positivity_scan(extreme, L, (1.0, 1.1), samples=1)


def test_commuted_region_of_l(extreme):
    L = build_multiplier(extreme, "L")
    region = commuted_region_radius(extreme, L)
    assert 1.004 < region.radius < 1.125
    assert region.failing_condition is not None
    assert region.witness_radius > region.radius


def test_commuted_form_is_on_derivative_block(extreme):
    L = build_multiplier(extreme, "L")
    form = bulk_form(extreme, L, [1.0, 1.002], commuted=True)
    assert form.chart == "commuted"
    assert form["vv"][0] == pytest.approx(16.0)
    assert form["ang"][0] == pytest.approx(30.0)
    assert form["vr"][0] == pytest.approx(2.2)


# ============================================================================
# Fluxes
# ============================================================================

def test_split_formula_matches_contraction_for_causal_field(extreme):
    N = build_multiplier(extreme, "N")
    r = np.linspace(1.0, 6.0, 200)
    psi, psi_v, psi_r = smooth_profile(r)
    for l in (0, 2):
        direct = direct_flux_density(extreme, N, r, psi, psi_v, psi_r, l)
        split = generalt_density(extreme, N, r, psi, psi_v, psi_r, l)
        np.testing.assert_allclose(split, direct, rtol=1e-9, atol=1e-12)
        assert np.all(split >= -1e-12)


def test_split_formula_rejects_non_causal_field(extreme):
    X0 = build_multiplier(extreme, "X_0")
    r = np.linspace(1.5, 6.0, 20)
    psi, psi_v, psi_r = smooth_profile(r)
    with pytest.raises(DomainError, match="not future causal"):
        generalt_density(extreme, X0, r, psi, psi_v, psi_r, 0)


def test_t_flux_is_slice_energy(extreme, small_run):
    T = build_multiplier(extreme, "T")
    for snap in small_run.snapshots[::5]:
        report = flux_through_slice(extreme, T, snap)
        expected = trapezoid(energy_density_T(extreme, snap), snap.r)
        assert report.value == pytest.approx(expected, rel=1e-9)
        assert report.descriptor["method"] == "generalt"


def test_auto_method_falls_back_to_contraction(extreme, small_run):
    X0 = build_multiplier(extreme, "X_0")
    report = flux_through_slice(extreme, X0, small_run.snapshots[2])
    assert report.descriptor["method"] == "direct"
    with pytest.raises(UsageError, match="Invalid method"):
        flux_through_slice(extreme, X0, small_run.snapshots[2], method="split")


def test_flux_region_selection(extreme, small_run):
    T = build_multiplier(extreme, "T")
    snap = small_run.snapshots[1]
    near = flux_through_slice(extreme, T, snap, r_range=(1.0, 2.0))
    assert near.descriptor["r_range"] == pytest.approx((1.0, 2.0))
    with pytest.raises(UsageError):
        flux_through_slice(extreme, T, snap, r_range=(3.0, 2.0))


def test_flux_series_of_t_energy(extreme, small_run):
    T = build_multiplier(extreme, "T")
    times, values = flux_series(extreme, T, small_run.snapshots)
    np.testing.assert_allclose(times, small_run.snapshot_times)
    assert np.all(values > 0)
    assert values[-1] <= values[0] * 1.001


def test_horizon_flux_ignores_sample_order(small_run):
    trace = small_run.trace
    flipped = dataclasses.replace(
        trace, times=trace.times[::-1], horizon_pi=trace.horizon_pi[::-1]
    )
    forward = horizon_flux_T(trace)
    assert forward >= 0
    assert horizon_flux_T(flipped) == pytest.approx(forward, rel=1e-12)
    assert horizon_flux_T(trace, (5.0, 5.0)) == 0.0


def test_rweighted_energy_domain(extreme, small_run):
    snap = small_run.snapshots[0]
    assert rweighted_energy(extreme, snap, 2.0, (3.0, 14.0)) > 0
    with pytest.raises(DomainError):
        rweighted_energy(extreme, snap, 3.0, (3.0, 14.0))
    with pytest.raises(DomainError):
        rweighted_energy(extreme, snap, 1.0, (1.5, 14.0))


def test_higher_order_energy(extreme, small_run):
    snap = small_run.snapshots[0]
    assert higher_order_energy(extreme, snap, 2.0, 1) > 0
    with pytest.raises(UsageError):
        higher_order_energy(extreme, snap, 2.0, -1)
    with pytest.raises(UsageError):
        higher_order_energy(extreme, snap, 1.05, 1)
