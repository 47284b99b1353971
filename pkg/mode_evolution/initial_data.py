# mode_evolution/initial_data.py
"""
Cauchy data on the initial slice t* = 0.

Data may be nonzero on the horizon. Bump data must vanish (to 1e-12 of
the amplitude) on the outer 10% of the grid so the far boundary starts
quiet and r psi^2 -> 0 holds by construction.
"""

from __future__ import annotations

from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy.interpolate import CubicSpline

from core.errors import DomainError
from geometry import BlackHoleBackground, metric_potential
from .grid import ModeField, RadialGrid

DataKind = Literal["gaussian_bump", "constant", "custom"]
MomentumProfile = Literal["zero", "ingoing", "outgoing"]

OUTER_FRACTION = 0.1
OUTER_TOLERANCE = 1e-12


class InitialDataSpec(BaseModel):
    """
    Description of the initial data.

    gaussian_bump: psi = A exp(-((r - center)/width)^2)
    constant:      psi = A
    custom:        cubic spline through (samples_r, samples_psi), zero outside

    Momentum profiles for Pi = d_t* psi:
    zero:     Pi = 0 (time-symmetric in t*)
    ingoing:  Pi = d_r psi, so d_r psi at fixed v vanishes initially
    outgoing: Pi = -D d_r psi / (2 - D), no incoming characteristic content
    """

    model_config = ConfigDict(extra="forbid")

    kind: DataKind = "gaussian_bump"
    center: float = 4.0
    width: float = Field(1.0, gt=0)
    amplitude: float = 1.0
    momentum: MomentumProfile = "zero"
    samples_r: list[float] | None = None
    samples_psi: list[float] | None = None

    @model_validator(mode="after")
    def _check_samples(self):
        if self.kind != "custom":
            return self
        if self.samples_r is None or self.samples_psi is None:
            raise ValueError("custom data requires samples_r and samples_psi")
        if len(self.samples_r) != len(self.samples_psi) or len(self.samples_r) < 4:
            raise ValueError("samples_r and samples_psi must have equal length >= 4")
        if np.any(np.diff(self.samples_r) <= 0):
            raise ValueError("samples_r must be strictly increasing")
        return self


def _profile(spec: InitialDataSpec, r: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    if spec.kind == "gaussian_bump":
        x = (r - spec.center) / spec.width
        psi = spec.amplitude * np.exp(-(x**2))
        return psi, -2.0 * x / spec.width * psi
    if spec.kind == "constant":
        return np.full_like(r, spec.amplitude), np.zeros_like(r)

    spline = CubicSpline(np.asarray(spec.samples_r), np.asarray(spec.samples_psi))
    inside = (r >= spec.samples_r[0]) & (r <= spec.samples_r[-1])
    psi = np.where(inside, spline(r), 0.0)
    dpsi = np.where(inside, spline(r, 1), 0.0)
    return psi, dpsi


def check_outer_decay(spec: InitialDataSpec, grid: RadialGrid, psi: np.ndarray) -> None:
    """
    Raise if bump data is not negligible on the outer 10% of the grid.

    Raises:
        DomainError: max |psi| there exceeds 1e-12 * |amplitude|
    """
    if spec.kind != "gaussian_bump":
        return
    cut = grid.r_max - OUTER_FRACTION * (grid.r_max - grid.r_min)
    outer = np.abs(psi[grid.nodes >= cut])
    limit = OUTER_TOLERANCE * abs(spec.amplitude)
    if outer.size and outer.max() > limit:
        raise DomainError(
            f"initial bump does not decay before r = {cut:.6g}: "
            f"max |psi| = {outer.max():.3e} > {limit:.3e}; increase r_max or reduce width"
        )


def build_initial_field(
    bg: BlackHoleBackground, grid: RadialGrid, spec: InitialDataSpec, l: int
) -> ModeField:
    """
    Sample the initial data on a grid.

    Args:
        bg: Background
        grid: Radial grid
        spec: Data description
        l: Angular frequency of the mode

    Returns:
        ModeField at t* = 0 with phi_r the exact derivative of the profile

    Raises:
        DomainError: Bump data not decayed near r_max
    """
    r = grid.nodes
    psi, phi = _profile(spec, r)
    check_outer_decay(spec, grid, psi)

    if spec.momentum == "zero":
        pi = np.zeros_like(r)
    elif spec.momentum == "ingoing":
        pi = phi.copy()
    else:
        d = np.asarray(metric_potential(bg, r))
        pi = -d * phi / (2.0 - d)
    return ModeField(l=l, r=r, psi=psi, pi=pi, phi_r=phi, time=0.0)
