# currents/fluxes.py
"""
Fluxes of (modified) currents through t* slices and the event horizon.

Slice integrals use the future unit normal n of {t* = const} and the
weight V(r) r^2 per unit solid angle; quadrature is the composite
trapezoid rule at grid resolution.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Literal

import numpy as np
import numpy.typing as npt
from scipy.integrate import trapezoid

from core.errors import DomainError, UsageError
from geometry import BlackHoleBackground, SliceGeometry, metric_potential
from mode_evolution import HorizonTrace, ModeField, SliceDerivatives, WaveSystem

from .multipliers import MultiplierField

logger = logging.getLogger(__name__)

FluxMethod = Literal["auto", "generalt", "direct"]


@dataclass(frozen=True, eq=False)
class FluxReport:
    """
    A flux value with the samples it was integrated from.

    Attributes:
        multiplier: Multiplier name
        descriptor: Slice description (t*, r-range, commutations, method)
        value: Integral
        radii: Quadrature nodes
        integrand: Integrand samples, density times V(r) r^2
    """

    multiplier: str
    descriptor: dict
    value: float
    radii: np.ndarray = field(repr=False)
    integrand: np.ndarray = field(repr=False)


# ============================================================================
# Pointwise densities
# ============================================================================

def _angular(l: int, r: np.ndarray, psi: np.ndarray) -> np.ndarray:
    return l * (l + 1) * psi**2 / r**2


def modification_flux(
    V: MultiplierField,
    r: np.ndarray,
    psi: np.ndarray,
    psi_v: np.ndarray,
    psi_r: np.ndarray,
    normal: tuple[np.ndarray, np.ndarray],
) -> np.ndarray:
    """Zeroth-order part g psi dpsi(n) + h psi^2 w' n^r + phi psi^2 n^r."""
    f = V.evaluate(r)
    n_v, n_r = normal
    return (
        f["g"] * psi * (n_v * psi_v + n_r * psi_r)
        + f["h"] * psi**2 * f["w_1"] * n_r
        + f["phi"] * psi**2 * n_r
    )


def direct_flux_density(
    bg: BlackHoleBackground,
    V: MultiplierField,
    r: npt.ArrayLike,
    psi: npt.ArrayLike,
    psi_v: npt.ArrayLike,
    psi_r: npt.ArrayLike,
    l: int,
) -> np.ndarray:
    """
    J^V_mu n^mu by direct contraction T(V, n) plus the modification terms.

    T(V, n) = dpsi(V) dpsi(n) - g(V, n) |grad psi|^2 / 2 with
    |grad psi|^2 = 2 psi_v psi_r + D psi_r^2 + l(l+1) psi^2 / r^2.
    """
    r = np.asarray(r, dtype=float)
    psi, psi_v, psi_r = (np.asarray(x, dtype=float) for x in (psi, psi_v, psi_r))
    f = V.evaluate(r)
    d = np.asarray(metric_potential(bg, r), dtype=float)
    n_v, n_r = SliceGeometry(bg).normal(r)
    f_v, f_r = f["f_v"], f["f_r"]

    dpsi_V = f_v * psi_v + f_r * psi_r
    dpsi_n = n_v * psi_v + n_r * psi_r
    g_vn = -d * f_v * n_v + f_v * n_r + f_r * n_v
    grad_sq = 2.0 * psi_v * psi_r + d * psi_r**2 + _angular(l, r, psi)
    principal = dpsi_V * dpsi_n - 0.5 * g_vn * grad_sq
    return principal + modification_flux(V, r, psi, psi_v, psi_r, (n_v, n_r))


def generalt_density(
    bg: BlackHoleBackground,
    V: MultiplierField,
    r: npt.ArrayLike,
    psi: npt.ArrayLike,
    psi_v: npt.ArrayLike,
    psi_r: npt.ArrayLike,
    l: int,
    tol: float = 1e-12,
) -> np.ndarray:
    """
    J^V_mu n^mu through the sum-of-squares split.

    With omega_X = D/2 - X^r / X^v and ww = omega_V omega_n,

        T(V, n) = V^v n^v [ (1 - D^2/(D^2 + 2 ww)) psi_v^2 + (ww/2) psi_r^2
                            + (a psi_v + b psi_r)^2 ] - g(V, n) |grad_S psi|^2 / 2

    a = D / sqrt(D^2 + 2 ww), b = sqrt(D^2 + 2 ww) / 2. Every term is
    non-negative when V is future causal.

    Raises:
        DomainError: V is not future causal at some radius (vanishing V is allowed)
    """
    r = np.asarray(r, dtype=float)
    psi, psi_v, psi_r = (np.asarray(x, dtype=float) for x in (psi, psi_v, psi_r))
    f = V.evaluate(r)
    d = np.asarray(metric_potential(bg, r), dtype=float)
    n_v, n_r = SliceGeometry(bg).normal(r)
    f_v, f_r = f["f_v"], f["f_r"]

    vanishing = (f_v == 0.0) & (f_r == 0.0)
    safe_fv = np.where(vanishing, 1.0, f_v)
    omega_v = d / 2.0 - f_r / safe_fv
    bad = ~vanishing & ((f_v <= 0.0) | (omega_v < -tol))
    if np.any(bad):
        raise DomainError(
            f"multiplier {V.name} is not future causal at r={r[np.argmax(bad)]:.6g}; "
            f"use direct_flux_density"
        )
    omega_n = d / 2.0 - n_r / n_v
    ww = np.maximum(omega_v, 0.0) * omega_n
    s = d**2 + 2.0 * ww
    root = np.sqrt(s)
    with np.errstate(divide="ignore", invalid="ignore"):
        a = np.where(root > 0, d / root, 0.0)
        split_v = np.where(s > 0, 1.0 - d**2 / s, 1.0)
    b = 0.5 * root

    weight = np.where(vanishing, 0.0, f_v * n_v)
    g_vn = -d * f_v * n_v + f_v * n_r + f_r * n_v
    principal = weight * (
        split_v * psi_v**2 + 0.5 * ww * psi_r**2 + (a * psi_v + b * psi_r) ** 2
    ) - 0.5 * g_vn * _angular(l, r, psi)
    return principal + modification_flux(V, r, psi, psi_v, psi_r, (n_v, n_r))


def energy_density_T(bg: BlackHoleBackground, field: ModeField) -> np.ndarray:
    """T-energy per unit r on a t* slice: r^2 [(2 - D) Pi^2 + D Phi^2 + l(l+1) psi^2 / r^2] / 2."""
    r = field.r
    d = np.asarray(metric_potential(bg, r), dtype=float)
    return 0.5 * r**2 * (
        (2.0 - d) * field.pi**2 + d * field.phi_r**2 + _angular(field.l, r, field.psi)
    )


# ============================================================================
# Slice integrals
# ============================================================================

def _select(r: np.ndarray, r_range: tuple[float, float] | None, min_nodes: int = 2) -> np.ndarray:
    if r_range is None:
        return np.ones_like(r, dtype=bool)
    lo, hi = r_range
    if hi < lo:
        raise UsageError(f"empty r_range [{lo}, {hi}]")
    slack = 1e-9 * (r[1] - r[0])
    mask = (r >= lo - slack) & (r <= hi + slack)
    if mask.sum() < min_nodes:
        raise UsageError(
            f"r_range [{lo}, {hi}] holds {int(mask.sum())} grid nodes, need {min_nodes}"
        )
    return mask


def _derivatives(bg: BlackHoleBackground, field: ModeField, commutations: int, accuracy: int):
    if commutations < 0:
        raise UsageError(f"commutations must be non-negative, got {commutations}")
    if commutations == 0:
        return field.psi, field.pi, field.ingoing_derivative()
    jets = SliceDerivatives(WaveSystem(bg, field.r, field.l, accuracy=accuracy)).jets(field, commutations)
    return jets["psi"], jets["psi_v"], jets["psi_r"]


def flux_through_slice(
    bg: BlackHoleBackground,
    V: MultiplierField,
    field: ModeField,
    r_range: tuple[float, float] | None = None,
    commutations: int = 0,
    method: FluxMethod = "auto",
    accuracy: int = 2,
) -> FluxReport:
    """
    Integral of J^V(d_r^k psi) . n over a t* slice segment.

    Args:
        bg: Background
        V: Multiplier
        field: Slice state
        r_range: Segment, default the whole grid
        commutations: k, the number of d_r|_v commutations
        method: "generalt" (split formula), "direct" (contraction) or
            "auto" (split where V is future causal, else direct)
        accuracy: Stencil order for commuted derivatives

    Raises:
        DomainError: V undefined on the segment, or split formula requested
            for a non-causal V
    """
    if method not in ("auto", "generalt", "direct"):
        raise UsageError(f"Invalid method: {method}. Must be one of: auto, generalt, direct")
    mask = _select(field.r, r_range)
    r = field.r[mask]
    V.check_radius(r)

    psi, psi_v, psi_r = (x[mask] for x in _derivatives(bg, field, commutations, accuracy))
    chosen = method
    if method == "auto":
        vals = V.evaluate(r)
        vanishing = (vals["f_v"] == 0.0) & (vals["f_r"] == 0.0)
        causal = vanishing | ((vals["f_v"] > 0.0) & (V.causal_character(r) <= 1e-12))
        chosen = "generalt" if np.all(causal) else "direct"

    density_fn = generalt_density if chosen == "generalt" else direct_flux_density
    density = density_fn(bg, V, r, psi, psi_v, psi_r, field.l)
    integrand = density * SliceGeometry(bg).area_volume(r)
    value = float(trapezoid(integrand, r))

    descriptor = {
        "tstar": field.time,
        "r_range": (float(r[0]), float(r[-1])),
        "commutations": commutations,
        "method": chosen,
    }
    return FluxReport(V.name, descriptor, value, r, integrand)


def flux_series(
    bg: BlackHoleBackground,
    V: MultiplierField,
    snapshots: Iterable[ModeField],
    r_range: tuple[float, float] | None = None,
    commutations: int = 0,
) -> tuple[np.ndarray, np.ndarray]:
    """(t*, flux) over a sequence of snapshots."""
    times, values = [], []
    for snap in snapshots:
        report = flux_through_slice(bg, V, snap, r_range, commutations=commutations)
        times.append(snap.time)
        values.append(report.value)
    return np.array(times), np.array(values)


def horizon_flux_T(trace: HorizonTrace, window: tuple[float, float] | None = None) -> float:
    """
    T-flux through the horizon, the integral of r_plus^2 (d_v psi)^2 dv.

    Samples are sorted by time first, so the order of the trace does not
    matter.
    """
    times = np.asarray(trace.times, dtype=float)
    pi = np.asarray(trace.horizon_pi, dtype=float)
    order = np.argsort(times, kind="stable")
    times, pi = times[order], pi[order]
    if window is not None:
        keep = (times >= window[0]) & (times <= window[1])
        times, pi = times[keep], pi[keep]
    if times.size < 2:
        return 0.0
    return float(trapezoid(trace.r_horizon**2 * pi**2, times))


def rweighted_energy(
    bg: BlackHoleBackground,
    field: ModeField,
    p: float,
    r_range: tuple[float, float],
) -> float:
    """
    Far-region quantity integral of r^(p-2) (d_v phi)^2 dr with phi = r psi.

    d_v at fixed u is (d_t + d_r*)/2, which on the slice reads
    d_v phi = ((2 - D) r Pi + D (psi + r Phi)) / 2.

    Raises:
        DomainError: p >= 3, or the segment reaches r <= 2M
    """
    if p >= 3:
        raise DomainError(f"r-weighted hierarchy requires p < 3, got {p}")
    if r_range[0] <= 2.0 * bg.mass:
        raise DomainError(
            f"r-weighted energy is a far-region quantity, need r > 2M = {2.0 * bg.mass}"
        )
    mask = _select(field.r, r_range)
    r = field.r[mask]
    d = np.asarray(metric_potential(bg, r), dtype=float)
    dv_phi = 0.5 * ((2.0 - d) * r * field.pi[mask] + d * (field.psi[mask] + r * field.phi_r[mask]))
    return float(trapezoid(r ** (p - 2.0) * dv_phi**2, r))


def higher_order_energy(
    bg: BlackHoleBackground,
    field: ModeField,
    r0: float,
    k: int,
    accuracy: int = 2,
) -> float:
    """
    Slice quantity over A = [r_plus, r0]:

        integral of (d_v d_r^k psi)^2 + (d_r^{k+1} psi)^2 + l(l+1)/r^2 (d_r^k psi)^2

    with weight V(r) r^2, derivatives taken at fixed v.

    Raises:
        UsageError: k < 0, or too few nodes in A for the one-sided stencils
    """
    if k < 0:
        raise UsageError(f"k must be non-negative, got {k}")
    needed = k + accuracy + 2
    mask = _select(field.r, (bg.r_plus, r0), min_nodes=needed)
    jets = SliceDerivatives(WaveSystem(bg, field.r, field.l, accuracy=accuracy)).jets(field, k)
    r = field.r[mask]
    integrand = (
        jets["psi_v"][mask] ** 2
        + jets["psi_r"][mask] ** 2
        + _angular(field.l, r, jets["psi"][mask])
    )
    if not np.all(np.isfinite(integrand)):
        warnings.warn("non-finite higher-order integrand; check grid resolution", RuntimeWarning)
    return float(trapezoid(integrand * SliceGeometry(bg).area_volume(r), r))
