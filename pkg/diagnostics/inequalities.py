# diagnostics/inequalities.py
"""
Hardy and Poincare inequalities evaluated on slice data.

Slice integrals are one-dimensional, along the radial line rho of a t*
slice, with d_rho psi = Phi.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np
from scipy.integrate import trapezoid

from core.errors import DomainError, UsageError
from geometry import BlackHoleBackground
from mode_evolution import ModeField

logger = logging.getLogger(__name__)

HardyKind = Literal["first", "second", "third"]
HARDY_KINDS = ("first", "second", "third")
BOUNDARY_TOLERANCE = 1e-8


@dataclass(frozen=True)
class InequalityResult:
    """lhs <= rhs is expected; ratio is 0 when both sides vanish."""

    which: str
    lhs: float
    rhs: float

    @property
    def ratio(self) -> float:
        if self.rhs == 0.0:
            return 0.0 if self.lhs == 0.0 else float("inf")
        return self.lhs / self.rhs

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs * (1.0 + 1e-12)

    def as_tuple(self) -> tuple[float, float, float]:
        return self.lhs, self.rhs, self.ratio


def _segment(field: ModeField, lo: float, hi: float) -> np.ndarray:
    slack = 1e-9 * field.h
    mask = (field.r >= lo - slack) & (field.r <= hi + slack)
    if mask.sum() < 2:
        raise UsageError(f"segment [{lo}, {hi}] holds fewer than two grid nodes")
    return mask


def _first_hardy(bg: BlackHoleBackground, field: ModeField) -> InequalityResult:
    rho, psi, dpsi = field.r, field.psi, field.phi_r
    lhs = float(trapezoid(psi**2, rho))
    rhs = float(4.0 * trapezoid((rho - bg.r_plus) ** 2 * dpsi**2, rho))
    boundary = (rho[-1] - bg.r_plus) * psi[-1] ** 2
    if lhs > 0 and boundary > BOUNDARY_TOLERANCE * lhs:
        warnings.warn(
            f"outer boundary term {boundary:.3e} is not negligible against {lhs:.3e}; "
            f"slice data does not decay at r_max",
            RuntimeWarning,
        )
    return InequalityResult("first", lhs, rhs)


def _second_hardy(
    bg: BlackHoleBackground, field: ModeField, r0: float, epsilon: float
) -> InequalityResult:
    if epsilon <= 0:
        raise UsageError(f"epsilon must be positive, got {epsilon}")
    if not bg.r_plus < r0 <= field.r[-1]:
        raise DomainError(f"r0 must lie in (r_plus, r_max], got {r0}")
    mask = _segment(field, bg.r_plus, r0)
    rho, psi, dpsi = field.r[mask], field.psi[mask], field.phi_r[mask]
    lhs = float((r0 - bg.r_plus) * field.psi[0] ** 2)
    rhs = float(
        epsilon * trapezoid(dpsi**2, rho)
        + trapezoid((1.0 + (rho - r0) ** 2 / epsilon) * psi**2, rho)
    )
    return InequalityResult("second", lhs, rhs)


def third_hardy_weight(rho: np.ndarray, r_plus: float, r0: float, r1: float) -> tuple[np.ndarray, np.ndarray]:
    """Piecewise linear h = 2(rho - r_plus) on [r_plus, r0], falling to 0 at r1; returns (h, h')."""
    top = 2.0 * (r0 - r_plus)
    inner = rho <= r0
    h = np.where(inner, 2.0 * (rho - r_plus), top * (r1 - rho) / (r1 - r0))
    dh = np.where(inner, 2.0, -top / (r1 - r0))
    return h, dh


def _third_hardy(
    bg: BlackHoleBackground, field: ModeField, r0: float, r1: float
) -> InequalityResult:
    if not bg.r_plus < r0 < r1 <= field.r[-1]:
        raise DomainError(f"need r_plus < r0 < r1 <= r_max, got r0={r0}, r1={r1}")
    a = _segment(field, bg.r_plus, r0)
    b = _segment(field, r0, r1)
    ab = _segment(field, bg.r_plus, r1)
    r = field.r
    h, dh = third_hardy_weight(r, bg.r_plus, r0, r1)
    lhs = float(trapezoid(field.psi[a] ** 2, r[a]))
    rhs = float(
        trapezoid((1.0 - dh[b]) * field.psi[b] ** 2, r[b])
        + trapezoid(h[ab] ** 2 * field.phi_r[ab] ** 2, r[ab])
    )
    return InequalityResult("third", lhs, rhs)


def hardy_check(
    bg: BlackHoleBackground,
    field: ModeField,
    which: HardyKind = "first",
    r0: float | None = None,
    r1: float | None = None,
    epsilon: float = 1.0,
) -> InequalityResult:
    """
    Evaluate one Hardy inequality on a slice.

    first:  int psi^2 <= 4 int (rho - r_plus)^2 (d_rho psi)^2
    second: (r0 - r_plus) psi(r_plus)^2 <= eps int (d_rho psi)^2 + int (1 + (rho - r0)^2/eps) psi^2
            over [r_plus, r0]
    third:  int_A psi^2 <= int_B (1 - h') psi^2 + int_{A u B} h^2 (d_rho psi)^2
            with A = [r_plus, r0], B = [r0, r1]

    Args:
        bg: Background
        field: Slice data
        which: Inequality
        r0, r1: Region radii, defaults 3M/2 and 7M/4
        epsilon: Weight of the second inequality

    Raises:
        UsageError: Unknown inequality
        DomainError: Region radii out of order
    """
    if which not in HARDY_KINDS:
        raise UsageError(f"Invalid inequality: {which}. Must be one of: {', '.join(HARDY_KINDS)}")
    r0 = 1.5 * bg.mass if r0 is None else r0
    r1 = 1.75 * bg.mass if r1 is None else r1
    if which == "first":
        result = _first_hardy(bg, field)
    elif which == "second":
        result = _second_hardy(bg, field, r0, epsilon)
    else:
        result = _third_hardy(bg, field, r0, r1)
    logger.debug(f"Hardy {which}: lhs={result.lhs:.6e} rhs={result.rhs:.6e}")
    return result


@dataclass(frozen=True, eq=False)
class PoincareResult:
    """
    Both sides of the Poincare inequality per radius and integrated.

    Attributes:
        L: Lowest mode present
        lhs_density: L(L+1)/r^2 sum psi_l^2
        rhs_density: sum l(l+1)/r^2 psi_l^2 (the |grad_S psi|^2 sphere average)
        max_gap: max relative gap (rhs - lhs) / max(rhs, tiny)
    """

    L: int
    r: np.ndarray
    lhs_density: np.ndarray
    rhs_density: np.ndarray
    lhs: float
    rhs: float
    max_gap: float

    @property
    def holds(self) -> bool:
        return bool(np.all(self.lhs_density <= self.rhs_density * (1.0 + 1e-12) + 1e-300))


def poincare_check(fields: ModeField | Sequence[ModeField], L: int) -> PoincareResult:
    """
    Poincare inequality for a superposition of orthonormal modes.

    Raises:
        UsageError: A mode below L, no fields, or fields on different grids
    """
    if isinstance(fields, ModeField):
        fields = [fields]
    if not fields:
        raise UsageError("poincare_check needs at least one mode field")
    r = fields[0].r
    for f in fields:
        if f.l < L:
            raise UsageError(f"mode l={f.l} lies below L={L}; the inequality does not apply")
        if f.r.shape != r.shape or not np.allclose(f.r, r):
            raise UsageError("all mode fields must share one radial grid")

    sq = sum(f.psi**2 for f in fields)
    lhs_d = L * (L + 1) * sq / r**2
    rhs_d = sum(f.l * (f.l + 1) * f.psi**2 for f in fields) / r**2
    with np.errstate(divide="ignore", invalid="ignore"):
        gaps = np.where(rhs_d > 0, (rhs_d - lhs_d) / rhs_d, 0.0)
    return PoincareResult(
        L=L,
        r=r,
        lhs_density=lhs_d,
        rhs_density=rhs_d,
        lhs=float(trapezoid(lhs_d * r**2, r)),
        rhs=float(trapezoid(rhs_d * r**2, r)),
        max_gap=float(np.max(np.abs(gaps))) if gaps.size else 0.0,
    )
