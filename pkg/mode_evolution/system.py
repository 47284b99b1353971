# mode_evolution/system.py
"""
First-order system for one mode in the (t*, r) chart.

Substituting d_r|_v = d_r|_t* - d_t* into the (v, r) wave operator gives,
with Pi = d_t* psi and Phi = d_r psi,

    d_t* psi = Pi
    d_t* Phi = d_r Pi
    (2 - D) d_t* Pi = (2 - 2D) d_r Pi + D d_r Phi + (2/r - R) Pi + R Phi - l(l+1) psi / r^2

The principal part has characteristic speeds dr/dt* = -1 (ingoing,
variable (2 - D) Pi + D Phi) and D/(2 - D) (outgoing, variable Pi - Phi).
At r = r_plus the outgoing speed is 0, so the horizon needs no boundary
condition. At r_max the ingoing variable is fixed by the outer condition.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Literal

import numpy as np
from scipy import sparse

from core.errors import UsageError
from geometry import BlackHoleBackground, metric_potential, radial_coefficient
from .grid import ModeField
from .stencils import derivative_matrix, dissipation_matrix

OuterBoundary = Literal["causal_buffer", "sommerfeld"]
ResidualChart = Literal["v_r", "tstar_r"]


def principal_speeds(d: float) -> tuple[float, float]:
    """Eigen-speeds dr/dt* of the principal symbol for potential value D."""
    a = (2.0 - 2.0 * d) / (2.0 - d)
    b = d / (2.0 - d)
    eig = np.linalg.eigvals(np.array([[a, b], [1.0, 0.0]]))
    speeds = sorted(float(-x.real) for x in eig)
    return speeds[0], speeds[1]


@dataclass
class WaveSystem:
    """
    Semi-discrete right-hand side for a fixed background, grid and mode.

    Coefficient arrays and sparse operators are built once and reused by
    every Runge-Kutta stage.
    """

    bg: BlackHoleBackground
    r: np.ndarray
    l: int
    accuracy: int = 2
    outer_boundary: OuterBoundary = "causal_buffer"
    dissipation: float = 0.0

    def __post_init__(self):
        if self.outer_boundary not in ("causal_buffer", "sommerfeld"):
            raise UsageError(
                f"Invalid outer boundary: {self.outer_boundary}. "
                f"Must be one of: causal_buffer, sommerfeld"
            )
        self.r = np.asarray(self.r, dtype=float)
        self.h = float(self.r[1] - self.r[0])
        self.n = len(self.r)
        self.D = np.asarray(metric_potential(self.bg, self.r))
        self.R = np.asarray(radial_coefficient(self.bg, self.r))
        self.inv_lapse = 1.0 / (2.0 - self.D)
        self.c_dpi = (2.0 - 2.0 * self.D) * self.inv_lapse
        self.c_dphi = self.D * self.inv_lapse
        self.c_pi = (2.0 / self.r - self.R) * self.inv_lapse
        self.c_phi = self.R * self.inv_lapse
        self.c_psi = -self.l * (self.l + 1) / self.r**2 * self.inv_lapse
        self.D1 = derivative_matrix(self.n, self.h, self.accuracy, 1)
        self.diss = dissipation_matrix(self.n, self.h, float(self.dissipation))

    @cached_property
    def D2(self) -> sparse.csr_matrix:
        return derivative_matrix(self.n, self.h, self.accuracy, 2)

    def pi_dot(
        self,
        psi: np.ndarray,
        pi: np.ndarray,
        phi: np.ndarray,
        dpi: np.ndarray | None = None,
    ) -> np.ndarray:
        """d_t* Pi from the evolution equation, without the outer override."""
        if dpi is None:
            dpi = self.D1 @ pi
        dphi = self.D1 @ phi
        return (
            self.c_dpi * dpi + self.c_dphi * dphi
            + self.c_pi * pi + self.c_phi * phi + self.c_psi * psi
        )

    def rhs(self, state: np.ndarray) -> np.ndarray:
        """Time derivative of the stacked state (psi, Pi, Phi)."""
        psi, pi, phi = state
        dpi = self.D1 @ pi
        pi_t = self.pi_dot(psi, pi, phi, dpi)

        # outer node: no incoming characteristic content
        d_out, r_out = self.D[-1], self.r[-1]
        if self.outer_boundary == "causal_buffer":
            pi_t[-1] = -d_out * dpi[-1] / (2.0 - d_out)
        else:
            pi_t[-1] = -d_out * (dpi[-1] + pi[-1] / r_out) / (2.0 - d_out)

        out = np.empty_like(state)
        out[0] = pi
        out[1] = pi_t
        out[2] = dpi
        if self.dissipation > 0:
            out[0] += self.diss @ psi
            out[1] += self.diss @ pi
            out[2] += self.diss @ phi
        return out

    def pi_dot_operators(self) -> tuple[sparse.csr_matrix, sparse.csr_matrix]:
        """
        Sparse (C_psi, C_pi) with d_t* Pi = C_psi psi + C_pi Pi when Phi = d_r psi.
        """
        diag = sparse.diags
        c_psi = diag(self.c_dphi) @ self.D2 + diag(self.c_phi) @ self.D1 + diag(self.c_psi)
        c_pi = diag(self.c_dpi) @ self.D1 + diag(self.c_pi)
        return c_psi.tocsr(), c_pi.tocsr()


class SliceDerivatives:
    """
    (v, r)-chart derivatives of psi reconstructed from one slice.

    Every quantity Y is kept as a pair of sparse operators (Y0, Y1) with
    Y = Y0 psi + Y1 Pi. Since d_t* Y = (Y1 C_psi) psi + (Y0 + Y1 C_pi) Pi,

        d_r|_v Y = (D1 Y0 - Y1 C_psi) psi + (D1 Y1 - Y0 - Y1 C_pi) Pi
        d_v Y    = (Y1 C_psi) psi + (Y0 + Y1 C_pi) Pi
    """

    def __init__(self, system: WaveSystem):
        self.system = system
        self.c_psi, self.c_pi = system.pi_dot_operators()
        n = system.n
        self._radial: list[tuple[sparse.csr_matrix, sparse.csr_matrix]] = [
            (sparse.identity(n, format="csr"), sparse.csr_matrix((n, n)))
        ]

    def _ingoing_radial(self, pair):
        y0, y1 = pair
        d1 = self.system.D1
        return (
            (d1 @ y0 - y1 @ self.c_psi).tocsr(),
            (d1 @ y1 - y0 - y1 @ self.c_pi).tocsr(),
        )

    def radial(self, k: int) -> tuple[sparse.csr_matrix, sparse.csr_matrix]:
        """Operator pair for d_r^k psi at fixed v."""
        while len(self._radial) <= k:
            self._radial.append(self._ingoing_radial(self._radial[-1]))
        return self._radial[k]

    def advanced(self, pair) -> tuple[sparse.csr_matrix, sparse.csr_matrix]:
        """Operator pair for d_v of the quantity represented by pair."""
        y0, y1 = pair
        return (y1 @ self.c_psi).tocsr(), (y0 + y1 @ self.c_pi).tocsr()

    @staticmethod
    def apply(pair, field: ModeField) -> np.ndarray:
        y0, y1 = pair
        return y0 @ field.psi + y1 @ field.pi

    def jets(self, field: ModeField, k: int) -> dict[str, np.ndarray]:
        """d_r^k psi, d_r^{k+1} psi and d_v d_r^k psi on the whole slice."""
        base = self.radial(k)
        return {
            "psi": self.apply(base, field),
            "psi_r": self.apply(self.radial(k + 1), field),
            "psi_v": self.apply(self.advanced(base), field),
        }


def reduced_equation_residual(
    bg: BlackHoleBackground,
    field: ModeField,
    chart: ResidualChart = "v_r",
    accuracy: int = 2,
    pi_dot: np.ndarray | None = None,
) -> np.ndarray:
    """
    Pointwise residual of the mode-reduced wave equation.

    In v_r: D psi_rr + 2 psi_vr + (2/r) psi_v + R psi_r - l(l+1) psi / r^2
    with d_r|_v = d_r|_t* - d_t*. Radial derivatives of psi come from the
    psi samples; d_t* Pi comes from the evolution equation unless an
    independent estimate pi_dot (e.g. differenced snapshots) is given.

    Args:
        bg: Background
        field: Slice state
        chart: "v_r" or "tstar_r" (same equation, t*-chart coefficients)
        accuracy: Stencil order used for psi derivatives
        pi_dot: Optional externally measured d_t* Pi

    Raises:
        UsageError: Unknown chart
    """
    if chart not in ("v_r", "tstar_r"):
        raise UsageError(f"Invalid chart: {chart}. Must be one of: v_r, tstar_r")
    system = WaveSystem(bg, field.r, field.l, accuracy=accuracy)
    psi, pi = field.psi, field.pi
    psi_r = system.D1 @ psi
    psi_rr = system.D2 @ psi
    pi_r = system.D1 @ pi
    pi_t = system.pi_dot(psi, pi, field.phi_r) if pi_dot is None else np.asarray(pi_dot)
    d, rr, r = system.D, system.R, system.r
    angular = -field.l * (field.l + 1) / r**2

    if chart == "v_r":
        dr_v = psi_r - pi
        drr_v = psi_rr - 2.0 * pi_r + pi_t
        dvr = pi_r - pi_t
        return d * drr_v + 2.0 * dvr + (2.0 / r) * pi + rr * dr_v + angular * psi
    return (
        (d - 2.0) * pi_t + (2.0 - 2.0 * d) * pi_r + d * psi_rr
        + (2.0 / r - rr) * pi + rr * psi_r + angular * psi
    )


def differenced_residual(
    bg: BlackHoleBackground,
    before: ModeField,
    field: ModeField,
    after: ModeField,
    chart: ResidualChart = "v_r",
    accuracy: int = 2,
) -> np.ndarray:
    """
    Residual of the reduced equation at field, measured from three
    equally spaced snapshots.

    Pi and d_t* Pi are replaced by the centred first and second time
    differences of psi, so the residual uses nothing from the evolution
    equations and converges at O(h^2 + dt^2) for a consistent scheme.

    Raises:
        UsageError: Snapshots on different grids or unequally spaced in t*
    """
    if not (len(before.r) == len(field.r) == len(after.r)):
        raise UsageError("snapshots must share one radial grid")
    dt = field.time - before.time
    if not dt > 0 or not np.isclose(after.time - field.time, dt, rtol=1e-9, atol=0.0):
        raise UsageError(
            f"snapshots must be equally spaced in t*, got times "
            f"{before.time}, {field.time}, {after.time}"
        )
    pi = (after.psi - before.psi) / (2.0 * dt)
    pi_dot = (after.psi - 2.0 * field.psi + before.psi) / dt**2
    measured = ModeField(
        l=field.l, r=field.r, psi=field.psi, pi=pi, phi_r=field.phi_r, time=field.time,
    )
    return reduced_equation_residual(bg, measured, chart=chart, accuracy=accuracy, pi_dot=pi_dot)
