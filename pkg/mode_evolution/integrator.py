# mode_evolution/integrator.py
"""
Method-of-lines time integration with classical RK4.

evolve() marches one mode from t* = 0 to t_final, storing snapshots at
the output cadence and a horizon trace (jets d_r^k psi|_v at r_plus,
the conserved quantity H_l, and the energy flux densities through the
horizon and the outer boundary) every trace_stride steps.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from core.errors import StabilityError, UsageError
from geometry import BlackHoleBackground, metric_potential
from horizon_calculus import ConservationLaw, derive_conservation_law
from .grid import ModeField, RadialGrid
from .horizon_jet import HorizonJetOperator
from .initial_data import InitialDataSpec, build_initial_field
from .system import OuterBoundary, WaveSystem

logger = logging.getLogger(__name__)

MAX_SPEED = 1.0


class EvolutionConfig(BaseModel):
    """
    Time-stepping settings.

    The step is dt = cfl * h / MAX_SPEED, the largest characteristic speed
    magnitude in the (t*, r) chart being 1.
    """

    model_config = ConfigDict(extra="forbid")

    cfl: float = Field(0.5, gt=0, le=1)
    t_final: float = Field(100.0, gt=0)
    output_every: float = Field(10.0, gt=0)
    spatial_order: Literal[2, 4] = 2
    outer_boundary: OuterBoundary = "causal_buffer"
    dissipation: float = Field(0.0, ge=0)
    trace_order: int | None = Field(None, ge=0)
    trace_stride: int = Field(1, ge=1)

    def time_step(self, h: float) -> float:
        return self.cfl * h / MAX_SPEED

    def resolved_trace_order(self, l: int) -> int:
        return l + 2 if self.trace_order is None else self.trace_order


@dataclass
class HorizonTrace:
    """
    Per-step horizon record.

    Attributes:
        times: t* values
        jets: Array (K+1, n_times); row k is d_r^k psi|_v at r_plus
        h_values: H_l series (extreme formula; a pseudo-quantity off
            extremality), None when the trace is too short for it
        horizon_pi: Pi at r_plus
        horizon_flux_density: r_plus^2 Pi^2, the T-energy flux through the horizon
        outer_flux_density: r^2 Pi ((1 - D) Pi + D Phi) at r_max, the T-energy
            flux leaving through the outer boundary is minus this
        r_horizon: r_plus
    """

    times: np.ndarray
    jets: np.ndarray
    h_values: np.ndarray | None
    horizon_pi: np.ndarray
    horizon_flux_density: np.ndarray
    outer_flux_density: np.ndarray
    r_horizon: float
    l: int

    @property
    def max_order(self) -> int:
        return self.jets.shape[0] - 1

    def derivative(self, k: int) -> np.ndarray:
        if k > self.max_order:
            raise UsageError(
                f"trace holds d_r^0..d_r^{self.max_order}, order {k} requested; "
                f"rerun with a larger trace_order"
            )
        return self.jets[k]


@dataclass
class EvolutionResult:
    """Snapshots, horizon trace and the settings that produced them."""

    bg: BlackHoleBackground
    l: int
    grid: RadialGrid
    config: EvolutionConfig
    snapshots: list[ModeField]
    trace: HorizonTrace
    dt: float
    n_steps: int
    law: ConservationLaw | None = None
    initial: InitialDataSpec | None = None
    meta: dict = field(default_factory=dict)

    @property
    def initial_field(self) -> ModeField:
        return self.snapshots[0]

    @property
    def final(self) -> ModeField:
        return self.snapshots[-1]

    @property
    def snapshot_times(self) -> np.ndarray:
        return np.array([s.time for s in self.snapshots])


def _rk4(system: WaveSystem, state: np.ndarray, dt: float) -> np.ndarray:
    k1 = system.rhs(state)
    k2 = system.rhs(state + 0.5 * dt * k1)
    k3 = system.rhs(state + 0.5 * dt * k2)
    k4 = system.rhs(state + dt * k3)
    return state + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _system_for(bg: BlackHoleBackground, fld: ModeField, config: EvolutionConfig) -> WaveSystem:
    return WaveSystem(
        bg, fld.r, fld.l,
        accuracy=config.spatial_order,
        outer_boundary=config.outer_boundary,
        dissipation=config.dissipation,
    )


def step(
    bg: BlackHoleBackground,
    fld: ModeField,
    config: EvolutionConfig,
    system: WaveSystem | None = None,
) -> ModeField:
    """
    Advance a field by one time step dt = cfl * h.

    Raises:
        StabilityError: The new state holds NaN or Inf; step is the index
            of the step that produced it, counted from t* = 0
    """
    system = system or _system_for(bg, fld, config)
    dt = config.time_step(fld.h)
    new = _rk4(system, fld.stacked(), dt)
    if not np.all(np.isfinite(new)):
        raise StabilityError(step=int(round(fld.time / dt)) + 1, time=fld.time + dt)
    return fld.with_state(new, fld.time + dt)


class _TraceRecorder:
    def __init__(self, bg: BlackHoleBackground, system: WaveSystem, jet_op: HorizonJetOperator):
        self.bg = bg
        self.system = system
        self.jet_op = jet_op
        self.times: list[float] = []
        self.jets: list[np.ndarray] = []
        self.pi: list[float] = []
        self.outer: list[float] = []
        self.d_out = float(metric_potential(bg, system.r[-1]))

    def record(self, t: float, state: np.ndarray) -> None:
        psi, pi, phi = state
        self.times.append(t)
        self.jets.append(self.jet_op(psi, pi))
        self.pi.append(pi[0])
        r_out, d = self.system.r[-1], self.d_out
        self.outer.append(r_out**2 * pi[-1] * ((1.0 - d) * pi[-1] + d * phi[-1]))

    def finish(self, l: int, law: ConservationLaw | None) -> HorizonTrace:
        jets = np.array(self.jets).T
        h_values = None
        if law is not None and jets.shape[0] >= law.jet_count:
            h_values = law.evaluate(list(jets), self.bg.mass)
        pi = np.array(self.pi)
        rp = self.bg.r_plus
        return HorizonTrace(
            times=np.array(self.times),
            jets=jets,
            h_values=h_values,
            horizon_pi=pi,
            horizon_flux_density=rp**2 * pi**2,
            outer_flux_density=np.array(self.outer),
            r_horizon=rp,
            l=l,
        )


def evolve(
    bg: BlackHoleBackground,
    initial: InitialDataSpec | ModeField,
    config: EvolutionConfig,
    *,
    grid: RadialGrid,
    l: int,
) -> EvolutionResult:
    """
    Evolve one mode and record snapshots plus the horizon trace.

    Args:
        bg: Background
        initial: Data description, or an explicit initial field on grid
        config: Time-stepping settings
        grid: Radial grid starting at r_plus
        l: Angular frequency

    Returns:
        EvolutionResult

    Raises:
        StabilityError: NaN/Inf produced; the message names the step
        DomainError: Initial bump not decayed near r_max
    """
    if isinstance(initial, ModeField):
        fld, spec = initial, None
    else:
        fld, spec = build_initial_field(bg, grid, initial, l), initial

    system = _system_for(bg, fld, config)
    dt = config.time_step(grid.h)
    n_steps = max(1, int(round(config.t_final / dt)))
    every = max(1, int(round(config.output_every / dt)))
    stride = config.trace_stride

    trace_order = config.resolved_trace_order(l)
    jet_op = HorizonJetOperator(bg, l, grid.h, trace_order, accuracy=config.spatial_order)
    law = derive_conservation_law(l) if trace_order >= l + 1 else None
    recorder = _TraceRecorder(bg, system, jet_op)

    logger.info(f"\n{'='*60}")
    logger.info(
        f"🚀 Evolving l={l} on e/M={bg.charge_ratio:.4g}: n={grid.n_points}, "
        f"h={grid.h:.4g}, dt={dt:.4g}, steps={n_steps}"
    )

    state = fld.stacked()
    snapshots = [fld.with_state(state, 0.0)]
    recorder.record(0.0, state)
    progress = max(1, n_steps // 10)

    for n in range(1, n_steps + 1):
        state = _rk4(system, state, dt)
        t = n * dt
        if not np.all(np.isfinite(state)):
            logger.error(f"❌ Non-finite state at step {n} (t*={t:.6g})")
            raise StabilityError(step=n, time=t)
        if n % stride == 0 or n == n_steps:
            recorder.record(t, state)
        if n % every == 0 or n == n_steps:
            snapshots.append(fld.with_state(state, t))
        if n % progress == 0:
            logger.debug(f"   step {n}/{n_steps} (t*={t:.4g})")

    trace = recorder.finish(l, law)
    logger.info(f"✅ Evolution finished at t*={n_steps * dt:.6g} with {len(snapshots)} snapshots")
    return EvolutionResult(
        bg=bg, l=l, grid=grid, config=config, snapshots=snapshots, trace=trace,
        dt=dt, n_steps=n_steps, law=law, initial=spec,
    )
