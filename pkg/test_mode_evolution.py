# test_mode_evolution.py
"""
Grid, stencils, initial data, horizon jets, integration and run storage.
"""

import numpy as np
import pytest
from pydantic import ValidationError

from core.errors import DomainError, StabilityError, UsageError
from mode_evolution import (
    EvolutionConfig,
    HorizonJetOperator,
    InitialDataSpec,
    ModeField,
    RadialGrid,
    SliceDerivatives,
    WaveSystem,
    build_initial_field,
    convergence_study,
    derivative_matrix,
    differenced_residual,
    evolve,
    fd_weights,
    load_run,
    principal_speeds,
    read_snapshot,
    reduced_equation_residual,
    step,
    write_run,
    write_snapshot,
)


def evolve_bump(bg, l, r_max, n_points, t_final, center=2.0, width=0.6, **settings):
    grid = RadialGrid.for_background(bg, r_max, n_points)
    spec = InitialDataSpec(center=center, width=width)
    config = EvolutionConfig(t_final=t_final, output_every=t_final, **settings)
    return evolve(bg, spec, config, grid=grid, l=l)


def drift(series: np.ndarray) -> float:
    return float(np.max(np.abs(series - series[0])))


# ============================================================================
# Grid and stencils
# ============================================================================

def test_grid_starts_on_horizon(extreme):
    grid = RadialGrid.for_background(extreme, 20.0, 381)
    assert grid.nodes[0] == extreme.r_plus
    assert grid.h == pytest.approx(0.05)
    fine = grid.refine(2)
    np.testing.assert_allclose(fine.nodes[::2], grid.nodes, rtol=0, atol=1e-12)


def test_grid_validation(extreme):
    with pytest.raises(DomainError, match="photon sphere"):
        RadialGrid.for_background(extreme, 1.9, 100)
    with pytest.raises(UsageError):
        RadialGrid.for_background(extreme, 10.0, 10)


def test_fd_weights_centered_second_derivative():
    np.testing.assert_allclose(fd_weights([-1, 0, 1], 2), [1.0, -2.0, 1.0], atol=1e-12)


@pytest.mark.parametrize("accuracy", [2, 4])
def test_derivative_matrix_exact_on_polynomials(accuracy):
    n, h = 21, 0.1
    x = np.arange(n) * h
    f = x**accuracy
    d1 = derivative_matrix(n, h, accuracy, 1) @ f
    d2 = derivative_matrix(n, h, accuracy, 2) @ x**2
    np.testing.assert_allclose(d1, accuracy * x ** (accuracy - 1), atol=1e-9)
    np.testing.assert_allclose(d2, 2.0, atol=1e-8)


def test_derivative_matrix_rejects_odd_order():
    with pytest.raises(UsageError, match="Invalid spatial order"):
        derivative_matrix(21, 0.1, 3, 1)


def test_principal_speeds():
    assert principal_speeds(0.0) == pytest.approx((-1.0, 0.0))
    assert principal_speeds(1.0) == pytest.approx((-1.0, 1.0))


# ============================================================================
# Initial data
# ============================================================================

def test_bump_derivative_is_exact(extreme, small_grid, bump):
    fld = build_initial_field(extreme, small_grid, bump, 0)
    x = (fld.r - bump.center) / bump.width
    np.testing.assert_allclose(fld.phi_r, -2.0 * x / bump.width * np.exp(-(x**2)), atol=1e-15)
    assert np.all(fld.pi == 0.0)


def test_ingoing_momentum_has_no_transversal_derivative(extreme, small_grid):
    spec = InitialDataSpec(center=3.0, momentum="ingoing")
    fld = build_initial_field(extreme, small_grid, spec, 1)
    np.testing.assert_allclose(fld.ingoing_derivative(), 0.0, atol=1e-15)


def test_bump_must_decay_before_outer_boundary(extreme, small_grid):
    spec = InitialDataSpec(center=14.5, width=1.0)
    with pytest.raises(DomainError, match="does not decay"):
        build_initial_field(extreme, small_grid, spec, 0)


def test_custom_data_requires_samples():
    with pytest.raises(ValidationError):
        InitialDataSpec(kind="custom")


def test_custom_data_spline(extreme, small_grid):
    r = np.linspace(1.0, 5.0, 9)
    spec = InitialDataSpec(kind="custom", samples_r=list(r), samples_psi=list(2.0 * r))
    fld = build_initial_field(extreme, small_grid, spec, 0)
    inside = fld.r <= 5.0
    np.testing.assert_allclose(fld.psi[inside], 2.0 * fld.r[inside], atol=1e-12)
    assert np.all(fld.psi[~inside] == 0.0)


# ============================================================================
# Horizon jets
# ============================================================================

def test_horizon_jets_exact_for_quadratic_data(extreme):
    h = 0.01
    r = 1.0 + h * np.arange(40)
    psi = 1.0 + 2.0 * (r - 1.0) + 3.0 * (r - 1.0) ** 2
    op = HorizonJetOperator(extreme, 0, h, max_order=1, accuracy=2)
    jets = op(psi, np.zeros_like(psi))
    assert jets[0] == pytest.approx(1.0, abs=1e-12)
    assert jets[1] == pytest.approx(2.0, abs=1e-9)


def test_horizon_jets_agree_with_slice_operators(extreme):
    grid = RadialGrid.for_background(extreme, 12.0, 1101)
    fld = build_initial_field(extreme, grid, InitialDataSpec(center=2.0, width=0.6), 1)
    jets = HorizonJetOperator(extreme, 1, grid.h, max_order=2).of_field(fld)
    slice_ops = SliceDerivatives(WaveSystem(extreme, fld.r, 1))
    second = slice_ops.jets(fld, 1)["psi_r"][0]
    assert jets[2] == pytest.approx(second, rel=2e-2, abs=1e-3)


def test_jet_operator_rejects_negative_order(extreme):
    with pytest.raises(UsageError):
        HorizonJetOperator(extreme, 0, 0.1, max_order=-1)


# ============================================================================
# Integration
# ============================================================================

def test_run_layout(small_run):
    assert len(small_run.snapshots) == 11
    np.testing.assert_allclose(small_run.snapshot_times, np.arange(0.0, 21.0, 2.0), atol=1e-9)
    assert small_run.trace.max_order == 2
    assert small_run.trace.h_values is not None
    assert small_run.trace.times[0] == 0.0
    assert np.all(np.isfinite(small_run.final.psi))


def test_horizon_quantity_conserved(extreme):
    trace = evolve_bump(extreme, 0, 12.0, 881, 10.0).trace
    h = trace.h_values
    np.testing.assert_allclose(h, trace.jets[1] + trace.jets[0], rtol=1e-12, atol=1e-14)
    assert abs(h[0]) > 0.1
    assert drift(h) / abs(h[0]) < 0.01

    # beta_0 off by 10% is visibly not conserved
    wrong = trace.jets[1] + 1.1 * trace.jets[0]
    assert drift(wrong) > 5.0 * drift(h)


def test_l2_horizon_quantity_conserved(extreme):
    coarse, fine = (
        evolve_bump(extreme, 2, 12.0, n, 8.0, center=2.5, width=1.0) for n in (441, 881)
    )
    assert drift(coarse.trace.h_values) / drift(fine.trace.h_values) > 3.0

    jets = fine.trace.jets
    betas = fine.law.numeric_betas(extreme.mass)
    lower = sum(b * jets[i] for i, b in enumerate(betas))
    np.testing.assert_allclose(fine.trace.h_values, jets[3] + lower, rtol=1e-12, atol=1e-12)
    assert drift(jets[3] + 1.1 * lower) > 5.0 * drift(fine.trace.h_values)


@pytest.mark.parametrize("steps_done, expected", [(0, 1), (3, 4)])
def test_step_detects_blowup(extreme, small_grid, steps_done, expected):
    config = EvolutionConfig()
    dt = config.time_step(small_grid.h)
    fld = ModeField.zeros(small_grid, 0)
    psi = fld.psi.copy()
    psi[10] = np.nan
    bad = ModeField(l=0, r=fld.r, psi=psi, pi=fld.pi, phi_r=fld.phi_r, time=steps_done * dt)
    with pytest.raises(StabilityError) as info:
        step(extreme, bad, config)
    assert info.value.step == expected
    assert info.value.time == pytest.approx(expected * dt)


def test_step_is_linear(extreme, small_grid, small_config):
    u = build_initial_field(extreme, small_grid, InitialDataSpec(center=2.0, width=0.6), 1)
    w = build_initial_field(
        extreme, small_grid, InitialDataSpec(center=4.0, width=0.8, momentum="ingoing"), 1
    )
    a, b = 2.5, -0.75
    lhs = step(extreme, u.combine(a, w, b), small_config).stacked()
    rhs = step(extreme, u, small_config).combine(a, step(extreme, w, small_config), b).stacked()
    np.testing.assert_allclose(lhs, rhs, rtol=0, atol=1e-12 * np.max(np.abs(rhs)))


@pytest.mark.parametrize(
    "config",
    [
        EvolutionConfig(),
        EvolutionConfig(outer_boundary="sommerfeld", dissipation=0.1, spatial_order=4),
    ],
)
def test_step_preserves_zero(extreme, small_grid, config):
    new = step(extreme, ModeField.zeros(small_grid, 2), config)
    assert not np.any(new.stacked())


def test_outer_boundary_outside_domain_of_dependence(extreme, bump):
    # t_final <= r_max - r_diag with r_diag = 5
    config = EvolutionConfig(t_final=8.0, output_every=8.0, outer_boundary="causal_buffer")
    near = evolve(extreme, bump, config, grid=RadialGrid.for_background(extreme, 15.0, 561), l=0)
    far = evolve(extreme, bump, config, grid=RadialGrid.for_background(extreme, 115.0, 4561), l=0)

    inside = int(np.count_nonzero(near.final.r <= 5.0))
    np.testing.assert_array_equal(near.final.r[:inside], far.final.r[:inside])
    np.testing.assert_array_equal(near.final.psi[:inside], far.final.psi[:inside])
    np.testing.assert_array_equal(near.final.pi[:inside], far.final.pi[:inside])
    np.testing.assert_array_equal(near.trace.jets, far.trace.jets)


def test_horizon_needs_no_boundary_condition(extreme, bump):
    config = EvolutionConfig(t_final=6.0, output_every=6.0)
    full = evolve(extreme, bump, config, grid=RadialGrid.for_background(extreme, 15.0, 561), l=0)
    half = evolve(extreme, bump, config, grid=RadialGrid.for_background(extreme, 8.0, 281), l=0)
    np.testing.assert_allclose(half.trace.jets, full.trace.jets, rtol=1e-13, atol=1e-14)

    # the horizon node is advanced by the interior equation
    system = WaveSystem(extreme, full.final.r, 0)
    state = full.final.stacked()
    assert system.rhs(state)[1][0] == system.pi_dot(*state)[0]


def test_differenced_residual_converges(extreme):
    spec = InitialDataSpec(center=3.0, width=0.6)
    config = EvolutionConfig(t_final=3.0, output_every=3.0)
    norms = []
    for n in (441, 881, 1761):
        grid = RadialGrid.for_background(extreme, 12.0, n)
        before = evolve(extreme, spec, config, grid=grid, l=1).final
        now = step(extreme, before, config)
        after = step(extreme, now, config)
        res = differenced_residual(extreme, before, now, after)
        inside = now.r <= 6.0
        norms.append(float(np.sqrt(grid.h * np.sum(res[inside] ** 2))))
    orders = np.log2(np.array(norms[:-1]) / np.array(norms[1:]))
    assert np.all(orders >= 1.8), orders


def test_differenced_residual_needs_equal_spacing(extreme, small_run):
    snaps = small_run.snapshots
    with pytest.raises(UsageError, match="equally spaced"):
        differenced_residual(extreme, snaps[0], snaps[1], snaps[3])


def test_residual_charts_agree(extreme, small_run):
    snap = small_run.snapshots[3]
    vr = reduced_equation_residual(extreme, snap, "v_r")
    ts = reduced_equation_residual(extreme, snap, "tstar_r")
    np.testing.assert_allclose(vr, ts, atol=1e-10)
    with pytest.raises(UsageError):
        reduced_equation_residual(extreme, snap, "u_v")


def test_wave_system_rejects_unknown_boundary(extreme, small_grid):
    with pytest.raises(UsageError, match="Invalid outer boundary"):
        WaveSystem(extreme, small_grid.nodes, 0, outer_boundary="reflecting")


def test_convergence_rejects_single_refinement(extreme, bump, small_config, small_grid):
    with pytest.raises(UsageError):
        convergence_study(extreme, bump, small_config, grid=small_grid, l=0, refinements=1)


@pytest.mark.slow
def test_convergence_order_of_horizon_quantity(extreme):
    # horizon jets grow like t^(k-1), so h * t_final stays small
    grid = RadialGrid.for_background(extreme, 16.0, 751)
    spec = InitialDataSpec(center=2.0, width=0.6)
    config = EvolutionConfig(t_final=10.0, output_every=5.0)
    report = convergence_study(extreme, spec, config, grid=grid, l=0, refinements=2)
    assert report.n_points == [751, 1501, 3001]
    assert report.diagnostics["horizon_psi"].min_order >= 1.8
    assert report.diagnostics["h_drift"].min_order >= 1.8


@pytest.mark.slow
def test_convergence_order_of_l2_drift(extreme):
    grid = RadialGrid.for_background(extreme, 16.0, 751)
    spec = InitialDataSpec(center=2.5, width=1.0)
    config = EvolutionConfig(t_final=10.0, output_every=5.0)
    report = convergence_study(extreme, spec, config, grid=grid, l=2, refinements=2)
    assert report.diagnostics["h_drift"].monotone
    assert report.diagnostics["h_drift"].min_order >= 1.8


# ============================================================================
# Storage
# ============================================================================

def test_snapshot_file_round_trip(tmp_path, small_run):
    snap = small_run.snapshots[4]
    path = write_snapshot(snap, tmp_path / "snap.csv")
    assert path.read_text().startswith("# t*=")
    back = read_snapshot(path, snap.l)
    assert back.time == snap.time
    np.testing.assert_array_equal(back.psi, snap.psi)


def test_run_directory_reload(tmp_path, small_run):
    written = write_run(small_run, tmp_path / "run")
    names = {p.name for p in written}
    assert {"run_meta.json", "horizon_trace.csv", "boundary_flux.csv"} <= names
    loaded = load_run(tmp_path / "run")
    assert loaded.l == small_run.l
    assert loaded.bg == small_run.bg
    assert len(loaded.snapshots) == len(small_run.snapshots)
    np.testing.assert_array_equal(loaded.trace.h_values, small_run.trace.h_values)
    np.testing.assert_array_equal(loaded.trace.derivative(2), small_run.trace.derivative(2))


def test_load_run_requires_metadata(tmp_path):
    with pytest.raises(UsageError, match="not a run directory"):
        load_run(tmp_path)
