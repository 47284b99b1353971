# geometry/background.py
"""
Reissner-Nordstrom exterior background.

Closed-form metric potential D(r) = 1 - 2M/r + e^2/r^2, the radial
coefficient R = D' + 2D/r of the (v, r) wave operator, horizon radii,
photon sphere and surface gravity. All functions accept scalars or numpy
arrays and return the same shape.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Literal

import numpy as np
import numpy.typing as npt

from core.errors import DomainError, UsageError

HorizonTag = Literal["outer", "inner"]

MAX_PUBLIC_ORDER = 8


@dataclass(frozen=True)
class BlackHoleBackground:
    """
    Mass/charge pair of a Reissner-Nordstrom exterior.

    Attributes:
        mass: M > 0, sets the length unit
        charge: e in [0, M]; e == M is the extreme case
    """

    mass: float = 1.0
    charge: float = 1.0

    def __post_init__(self):
        if not self.mass > 0:
            raise DomainError(f"mass must be positive, got {self.mass}")
        if not 0.0 <= self.charge <= self.mass:
            raise DomainError(
                f"charge must lie in [0, mass] = [0, {self.mass}], got {self.charge}"
            )

    @classmethod
    def from_ratio(cls, mass: float = 1.0, charge_ratio: float = 1.0) -> BlackHoleBackground:
        """Build a background from M and e/M."""
        if not 0.0 <= charge_ratio <= 1.0:
            raise DomainError(f"charge_ratio must lie in [0,1], got {charge_ratio}")
        charge = mass if charge_ratio == 1.0 else charge_ratio * mass
        return cls(mass=mass, charge=charge)

    @property
    def is_extreme(self) -> bool:
        return self.charge == self.mass

    @property
    def charge_ratio(self) -> float:
        return self.charge / self.mass

    @cached_property
    def _root_gap(self) -> float:
        return math.sqrt(max(self.mass**2 - self.charge**2, 0.0))

    @cached_property
    def r_plus(self) -> float:
        return self.mass + self._root_gap

    @cached_property
    def r_minus(self) -> float:
        # Vieta form avoids cancellation for small charge
        if self.is_extreme:
            return self.mass
        return self.charge**2 / self.r_plus

    def D(self, r: npt.ArrayLike, order: int = 0):
        """Shorthand for metric_potential(self, r, order)."""
        return metric_potential(self, r, order)

    def R(self, r: npt.ArrayLike, order: int = 0):
        """Shorthand for radial_coefficient(self, r, order)."""
        return radial_coefficient(self, r, order)


# ============================================================================
# Helpers
# ============================================================================

def _as_radius(r: npt.ArrayLike) -> np.ndarray:
    arr = np.asarray(r, dtype=float)
    if np.any(~(arr > 0)):
        raise DomainError(f"radius must be positive, got min {np.min(arr)}")
    return arr


def _shape_like(value: np.ndarray, r: npt.ArrayLike):
    return float(value) if np.ndim(r) == 0 else value


def _power_jet(n: int, k: int, r: np.ndarray) -> np.ndarray:
    """k-th derivative of r^(-n): (-1)^k (n)_k r^(-n-k), (n)_k the rising factorial."""
    rising = math.prod(range(n, n + k))
    return (-1) ** k * rising * r ** (-n - k)


def metric_jet(bg: BlackHoleBackground, r: npt.ArrayLike, order: int) -> np.ndarray:
    """Any-order derivative of D; no order cap, no scalar conversion."""
    r = _as_radius(r)
    base = 1.0 if order == 0 else 0.0
    return base - 2.0 * bg.mass * _power_jet(1, order, r) + bg.charge**2 * _power_jet(2, order, r)


def radial_jet(bg: BlackHoleBackground, r: npt.ArrayLike, order: int) -> np.ndarray:
    """Any-order derivative of R = 2/r - 2M/r^2 (the charge cancels)."""
    r = _as_radius(r)
    return 2.0 * _power_jet(1, order, r) - 2.0 * bg.mass * _power_jet(2, order, r)


# ============================================================================
# Public operations
# ============================================================================

def metric_potential(bg: BlackHoleBackground, r: npt.ArrayLike, order: int = 0):
    """
    Metric potential D or its exact derivative d^k D / dr^k.

    Args:
        bg: Background
        r: Radius (scalar or array), must be positive
        order: Derivative order, 0 <= order <= 8

    Returns:
        D^(order)(r), same shape as r

    Raises:
        DomainError: If any r is non-positive
        UsageError: If order is outside [0, 8]
    """
    if not 0 <= order <= MAX_PUBLIC_ORDER:
        raise UsageError(f"order must lie in [0, {MAX_PUBLIC_ORDER}], got {order}")
    return _shape_like(metric_jet(bg, r, order), r)


def radial_coefficient(bg: BlackHoleBackground, r: npt.ArrayLike, order: int = 0):
    """R = D' + 2D/r and its derivatives, same contract as metric_potential."""

    if not 0 <= order <= MAX_PUBLIC_ORDER:
        raise UsageError(f"order must lie in [0, {MAX_PUBLIC_ORDER}], got {order}")
    return _shape_like(radial_jet(bg, r, order), r)


def trapping_polynomial(bg: BlackHoleBackground, r: npt.ArrayLike):
    """P(r) = r^2 - 3Mr + 2e^2; its root outside r_plus is the photon sphere."""
    r = np.asarray(r, dtype=float)
    return r**2 - 3.0 * bg.mass * r + 2.0 * bg.charge**2


def photon_sphere(bg: BlackHoleBackground) -> float:
    """Radius Q = (3M/2)(1 + sqrt(1 - 8e^2/(9M^2))) of the photon sphere."""
    m, e = bg.mass, bg.charge
    return 1.5 * m * (1.0 + math.sqrt(1.0 - 8.0 * e**2 / (9.0 * m**2)))


def surface_gravity(bg: BlackHoleBackground, horizon: HorizonTag = "outer") -> float:
    """
    Surface gravity kappa = (r_h - r_other) / (2 r_h^2) of a horizon.

    Args:
        bg: Background
        horizon: "outer" or "inner"

    Raises:
        DomainError: Inner horizon requested for an uncharged background
        UsageError: Unknown horizon tag
    """
    if horizon == "outer":
        return (bg.r_plus - bg.r_minus) / (2.0 * bg.r_plus**2)
    if horizon == "inner":
        if bg.charge == 0:
            raise DomainError("inner horizon does not exist for charge 0")
        return (bg.r_minus - bg.r_plus) / (2.0 * bg.r_minus**2)
    raise UsageError(f"Invalid horizon: {horizon}. Must be one of: outer, inner")
