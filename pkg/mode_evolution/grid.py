# mode_evolution/grid.py
"""
Radial grid and the discrete state of one angular mode.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cached_property

import numpy as np

from core.errors import DomainError, UsageError
from geometry import BlackHoleBackground, photon_sphere

MIN_POINTS = 16


@dataclass(frozen=True)
class RadialGrid:
    """
    Uniform grid on [r_min, r_max] whose first node is the outer horizon.

    Attributes:
        r_min: First node, equal to r_plus
        r_max: Last node, beyond the photon sphere
        n_points: Number of nodes, at least 16
    """

    r_min: float
    r_max: float
    n_points: int

    def __post_init__(self):
        if self.n_points < MIN_POINTS:
            raise UsageError(f"n_points must be >= {MIN_POINTS}, got {self.n_points}")
        if not self.r_max > self.r_min:
            raise DomainError(f"r_max ({self.r_max}) must exceed r_min ({self.r_min})")

    @classmethod
    def for_background(cls, bg: BlackHoleBackground, r_max: float, n_points: int) -> RadialGrid:
        """Grid starting exactly at r_plus; r_max must lie beyond the photon sphere."""
        q = photon_sphere(bg)
        if not r_max > q:
            raise DomainError(f"r_max must exceed the photon sphere radius {q:.6g}, got {r_max}")
        return cls(r_min=bg.r_plus, r_max=r_max, n_points=n_points)

    @property
    def h(self) -> float:
        return (self.r_max - self.r_min) / (self.n_points - 1)

    @cached_property
    def nodes(self) -> np.ndarray:
        r = np.linspace(self.r_min, self.r_max, self.n_points)
        r[0] = self.r_min
        return r

    def refine(self, factor: int = 2) -> RadialGrid:
        """Grid with spacing h/factor sharing every node of this one."""
        return replace(self, n_points=(self.n_points - 1) * factor + 1)


@dataclass(frozen=True, eq=False)
class ModeField:
    """
    State of mode l on a t* slice.

    Attributes:
        l: Angular frequency
        r: Radial nodes
        psi: psi
        pi: d_t* psi, equal to d_v psi
        phi_r: d_r psi at fixed t*
        time: t*
    """

    l: int
    r: np.ndarray
    psi: np.ndarray
    pi: np.ndarray
    phi_r: np.ndarray
    time: float = 0.0
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        n = len(self.r)
        for name in ("psi", "pi", "phi_r"):
            if len(getattr(self, name)) != n:
                raise UsageError(f"{name} has length {len(getattr(self, name))}, expected {n}")

    @classmethod
    def zeros(cls, grid: RadialGrid, l: int, time: float = 0.0) -> ModeField:
        n = grid.n_points
        return cls(l=l, r=grid.nodes, psi=np.zeros(n), pi=np.zeros(n), phi_r=np.zeros(n), time=time)

    @property
    def h(self) -> float:
        return float(self.r[1] - self.r[0])

    def stacked(self) -> np.ndarray:
        return np.vstack([self.psi, self.pi, self.phi_r])

    def with_state(self, state: np.ndarray, time: float) -> ModeField:
        return ModeField(
            l=self.l, r=self.r, psi=state[0].copy(), pi=state[1].copy(),
            phi_r=state[2].copy(), time=time,
        )

    def combine(self, a: float, other: ModeField, b: float) -> ModeField:
        """a * self + b * other at this field's time."""
        return self.with_state(a * self.stacked() + b * other.stacked(), self.time)

    def ingoing_derivative(self) -> np.ndarray:
        """d_r psi at fixed v, equal to phi_r - pi."""
        return self.phi_r - self.pi
