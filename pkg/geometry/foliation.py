# geometry/foliation.py
"""
Induced geometry of the constant-t* slices.

With t* = v - r the slice metric is h_rr dr^2 with h_rr = 2 - D, the
future unit normal is n = (1, D - 1) / sqrt(2 - D) in (v, r) components,
and the volume element is sqrt(2 - D) r^2 dr dω. All quantities are
regular on the horizon since D < 1 outside it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np
import numpy.typing as npt

from core.errors import DomainError
from .background import BlackHoleBackground, metric_potential


@dataclass(frozen=True)
class SliceGeometry:
    """Closed-form slice quantities of the {t* = const} foliation."""

    bg: BlackHoleBackground
    foliation: Literal["tstar"] = "tstar"

    def _potential(self, r: npt.ArrayLike) -> np.ndarray:
        arr = np.asarray(r, dtype=float)
        if np.any(arr < self.bg.r_plus):
            raise DomainError(f"slice quantities require r >= r_plus = {self.bg.r_plus}")
        return np.asarray(metric_potential(self.bg, arr))

    def h_rr(self, r: npt.ArrayLike) -> np.ndarray:
        return 2.0 - self._potential(r)

    def volume_factor(self, r: npt.ArrayLike) -> np.ndarray:
        return np.sqrt(self.h_rr(r))

    def area_volume(self, r: npt.ArrayLike) -> np.ndarray:
        """V(r) r^2, the radial weight of slice integrals per unit solid angle."""
        return self.volume_factor(r) * np.asarray(r, dtype=float) ** 2

    def normal(self, r: npt.ArrayLike) -> tuple[np.ndarray, np.ndarray]:
        """Future unit normal components (n^v, n^r)."""
        d = self._potential(r)
        root = np.sqrt(2.0 - d)
        return 1.0 / root, (d - 1.0) / root

    def normal_norm(self, r: npt.ArrayLike) -> np.ndarray:
        """g(n, n) = -D (n^v)^2 + 2 n^v n^r, equal to -1."""
        d = self._potential(r)
        nv, nr = self.normal(r)
        return -d * nv**2 + 2.0 * nv * nr
