# currents/bulk.py
"""
Bulk terms K^V = T(grad V) of (modified) currents as quadratic forms.

In the (v, r) chart a form reads

    C_vv psi_v^2 + C_rr psi_r^2 + C_vr psi_v psi_r + C_ang |grad_S psi|^2
      + C_00 psi^2 + C_0v psi psi_v + C_0r psi psi_r

and for a mode of angular number l the angular term contributes
C_ang l(l+1)/r^2 psi^2. The (t, r*) chart carries the same information
with keys tt, ss, ts, 0t, 0s.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Literal

import numpy as np
import numpy.typing as npt

from core.errors import DomainError, UsageError
from geometry import BlackHoleBackground, metric_potential, radial_coefficient

from .multipliers import MultiplierField

logger = logging.getLogger(__name__)

BulkChart = Literal["v_r", "t_rstar"]

CHART_KEYS: dict[str, tuple[str, ...]] = {
    "v_r": ("vv", "rr", "vr", "ang", "00", "0v", "0r"),
    "t_rstar": ("tt", "ss", "ts", "ang", "00", "0t", "0s"),
    "commuted": ("vv", "rr", "vr", "ang", "00", "0v", "0r"),
}


@dataclass(frozen=True, eq=False)
class QuadraticForm:
    """
    Coefficients of a bulk term at one or more radii.

    Attributes:
        chart: "v_r", "t_rstar", or "commuted" (principal part of the
            d_r-commuted current, acting on d_r psi)
        r: Radii the coefficients were evaluated at
        l: Angular number used by mode_potential
        coefficients: Arrays keyed by CHART_KEYS[chart]
    """

    chart: str
    r: np.ndarray
    l: int
    coefficients: dict[str, np.ndarray]

    def __getitem__(self, key: str) -> np.ndarray:
        if key not in self.coefficients:
            raise UsageError(
                f"Invalid coefficient: {key}. Must be one of: {', '.join(self.coefficients)}"
            )
        return self.coefficients[key]

    @property
    def block(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(first^2, second^2, mixed) coefficients of the derivative block."""
        a, b, c = CHART_KEYS[self.chart][:3]
        return self.coefficients[a], self.coefficients[b], self.coefficients[c]

    def eigenvalues(self) -> tuple[np.ndarray, np.ndarray]:
        """Eigenvalues (min, max) of [[a, c/2], [c/2, b]] at every radius."""
        a, b, c = self.block
        mean = 0.5 * (a + b)
        spread = np.hypot(0.5 * (a - b), 0.5 * c)
        return mean - spread, mean + spread

    def min_eigenvalue(self) -> np.ndarray:
        return self.eigenvalues()[0]

    def mode_potential(self) -> np.ndarray:
        """Angular contribution per psi^2 for the stored l."""
        return self.coefficients["ang"] * self.l * (self.l + 1) / self.r**2

    def is_zero(self) -> bool:
        return all(np.all(v == 0.0) for v in self.coefficients.values())

    def contract(
        self,
        first: npt.ArrayLike,
        second: npt.ArrayLike,
        psi: npt.ArrayLike = 0.0,
    ) -> np.ndarray:
        """
        Value of the form on a mode with the given derivatives.

        Args:
            first: psi_v (v_r chart) or psi_t (t_rstar chart)
            second: psi_r or psi_r*
            psi: Field value (zeroth-order and angular terms)
        """
        keys = CHART_KEYS[self.chart]
        c = self.coefficients
        first, second, psi = (np.asarray(x, dtype=float) for x in (first, second, psi))
        return (
            c[keys[0]] * first**2
            + c[keys[1]] * second**2
            + c[keys[2]] * first * second
            + (c["00"] + self.mode_potential()) * psi**2
            + c[keys[5]] * psi * first
            + c[keys[6]] * psi * second
        )

    def in_tortoise_chart(self, bg: BlackHoleBackground) -> QuadraticForm:
        """
        Rewrite a (v, r) form with d_v = d_t and d_r = (d_r* - d_t)/D.

        Raises:
            UsageError: Form is not in the v_r chart
        """
        if self.chart != "v_r":
            raise UsageError(f"cannot convert a {self.chart} form to t_rstar")
        d = np.asarray(metric_potential(bg, self.r), dtype=float)
        c = self.coefficients
        a, b, m = c["vv"], c["rr"], c["vr"]
        with np.errstate(divide="ignore", invalid="ignore"):
            converted = {
                "tt": a + b / d**2 - m / d,
                "ss": b / d**2,
                "ts": -2.0 * b / d**2 + m / d,
                "ang": c["ang"].copy(),
                "00": c["00"].copy(),
                "0t": c["0v"] - c["0r"] / d,
                "0s": c["0r"] / d,
            }
        return QuadraticForm("t_rstar", self.r, self.l, converted)


def _coefficients_vr(bg: BlackHoleBackground, V: MultiplierField, r: np.ndarray) -> dict[str, np.ndarray]:
    f = V.evaluate(r)
    d = np.asarray(metric_potential(bg, r), dtype=float)
    d1 = np.asarray(metric_potential(bg, r, 1), dtype=float)
    rr = np.asarray(radial_coefficient(bg, r), dtype=float)

    c = {
        "vv": f["f_v_1"],
        "vr": d * f["f_v_1"] - 2.0 * f["f_r"] / r,
        "rr": d * (0.5 * f["f_r_1"] - f["f_r"] / r) - 0.5 * f["f_r"] * d1,
        "ang": -0.5 * f["f_r_1"],
        "00": np.zeros_like(r),
        "0v": np.zeros_like(r),
        "0r": np.zeros_like(r),
    }

    # div(g psi grad psi)
    g, g1 = f["g"], f["g_1"]
    c["vr"] = c["vr"] + 2.0 * g
    c["rr"] = c["rr"] + g * d
    c["ang"] = c["ang"] + g
    c["0v"] = c["0v"] + g1
    c["0r"] = c["0r"] + d * g1

    # div(h psi^2 grad w)
    h, h1, w1, w2 = f["h"], f["h_1"], f["w_1"], f["w_2"]
    c["00"] = c["00"] + h * d * w2 + h * rr * w1 + h1 * d * w1
    c["0v"] = c["0v"] + 2.0 * h * w1
    c["0r"] = c["0r"] + 2.0 * h * d * w1

    # div(phi psi^2 d_r*)
    phi, phi1 = f["phi"], f["phi_1"]
    c["00"] = c["00"] + d * phi1 + phi * rr
    c["0v"] = c["0v"] + 2.0 * phi
    c["0r"] = c["0r"] + 2.0 * d * phi
    return c


# ============================================================================
# Commuted current
# ============================================================================

H_NAMES = tuple(f"H{i}" for i in range(1, 11))


def commuted_bulk_coefficients(
    bg: BlackHoleBackground, V: MultiplierField, r: npt.ArrayLike
) -> dict[str, np.ndarray]:
    """
    Coefficients H1..H10 of div J^V(d_r psi) for a mode solution.

    H1 (d_v d_r psi)^2, H2 (d_r d_r psi)^2, H3 |grad_S d_r psi|^2 and H9
    (d_v d_r psi)(d_r d_r psi) form the principal part; the others couple
    to psi_v, psi_r and the spherical Laplacian of psi.
    """
    r = V.check_radius(r)
    f = V.evaluate(r)
    d = np.asarray(metric_potential(bg, r), dtype=float)
    d1 = np.asarray(metric_potential(bg, r, 1), dtype=float)
    r1 = np.asarray(radial_coefficient(bg, r, 1), dtype=float)
    f_v, f_v1, f_r, f_r1 = f["f_v"], f["f_v_1"], f["f_r"], f["f_r_1"]
    return {
        "H1": f_v1,
        "H2": d * (0.5 * f_r1 - f_r / r) - 1.5 * d1 * f_r,
        "H3": -0.5 * f_r1,
        "H4": 2.0 * f_v / r**2,
        "H5": -f_v * r1,
        "H6": 2.0 * f_r / r**2,
        "H7": 2.0 * f_v / r,
        "H8": 2.0 * f_r / r,
        "H9": d * f_v1 - d1 * f_v - 2.0 * f_r / r,
        "H10": -f_r * r1,
    }


# Sign conditions near the horizon; each maps (f, H, D, R) to a boolean array
ConditionCheck = Callable[[dict, dict, np.ndarray, np.ndarray, float], np.ndarray]

COMMUTED_CONDITIONS: dict[str, ConditionCheck] = {
    "f_v > 1": lambda f, H, d, rr, tol: f["f_v"] > 1.0,
    "f_v' > 1": lambda f, H, d, rr, tol: f["f_v_1"] > 1.0,
    "-f_r > 1": lambda f, H, d, rr, tol: -f["f_r"] > 1.0,
    "H1 > 1": lambda f, H, d, rr, tol: H["H1"] > 1.0,
    "H2 >= 0": lambda f, H, d, rr, tol: H["H2"] >= -tol,
    "H3 > 1": lambda f, H, d, rr, tol: H["H3"] > 1.0,
    "H8 < H3/10": lambda f, H, d, rr, tol: H["H8"] < H["H3"] / 10.0,
    "H9 D <= H2/10": lambda f, H, d, rr, tol: H["H9"] * d <= H["H2"] / 10.0 + tol,
    "(H9 R)^2 <= H2/10": lambda f, H, d, rr, tol: (H["H9"] * rr) ** 2 <= H["H2"] / 10.0 + tol,
    "H9 < H3/10": lambda f, H, d, rr, tol: H["H9"] < H["H3"] / 10.0,
}


@dataclass(frozen=True)
class CommutedRegion:
    """Largest radius r0 with every commuted sign condition on [r_plus, r0]."""

    radius: float
    failing_condition: str | None
    witness_radius: float | None


def commuted_region_radius(
    bg: BlackHoleBackground,
    V: MultiplierField,
    r_max: float | None = None,
    samples: int = 4000,
    tol: float = 1e-12,
) -> CommutedRegion:
    """
    Scan outward from the horizon until a commuted sign condition fails.

    Args:
        bg: Background
        V: Commuted multiplier (L)
        r_max: End of the scan, default 2M
        samples: Number of sample radii
        tol: Slack for the non-strict conditions

    Returns:
        CommutedRegion; radius equals r_plus when a condition fails at the
        horizon and r_max when none fails
    """
    r_max = 2.0 * bg.mass if r_max is None else r_max
    r = np.linspace(bg.r_plus, r_max, samples)
    f = V.evaluate(r)
    H = commuted_bulk_coefficients(bg, V, r)
    d = np.asarray(metric_potential(bg, r), dtype=float)
    rr = np.asarray(radial_coefficient(bg, r), dtype=float)

    first_failure = samples
    failing = None
    for label, check in COMMUTED_CONDITIONS.items():
        bad = np.flatnonzero(~check(f, H, d, rr, tol))
        if bad.size and bad[0] < first_failure:
            first_failure, failing = int(bad[0]), label

    if failing is None:
        return CommutedRegion(radius=float(r_max), failing_condition=None, witness_radius=None)
    radius = r[first_failure - 1] if first_failure > 0 else bg.r_plus
    logger.debug(f"Commuted condition '{failing}' fails at r={r[first_failure]:.6g}")
    return CommutedRegion(
        radius=float(radius), failing_condition=failing, witness_radius=float(r[first_failure])
    )


# ============================================================================
# Public operations
# ============================================================================

def bulk_form(
    bg: BlackHoleBackground,
    V: MultiplierField,
    r: npt.ArrayLike,
    l: int = 0,
    chart: BulkChart = "v_r",
    commuted: bool = False,
) -> QuadraticForm:
    """
    Bulk term K^V at radius r (scalar or array).

    Args:
        bg: Background
        V: Multiplier with its modification
        r: Radius or radii inside V's validity region
        l: Angular number for mode_potential and contract
        chart: "v_r" or "t_rstar"
        commuted: Return the principal part (H1, H2, H9, H3) of the
            d_r-commuted current instead

    Raises:
        DomainError: r outside the validity region (or on the horizon for t_rstar)
        UsageError: Unknown chart or l < 0
    """
    if chart not in ("v_r", "t_rstar"):
        raise UsageError(f"Invalid chart: {chart}. Must be one of: v_r, t_rstar")
    if l < 0:
        raise UsageError(f"l must be non-negative, got {l}")
    r_arr = np.atleast_1d(V.check_radius(r)).astype(float)

    if commuted:
        H = commuted_bulk_coefficients(bg, V, r_arr)
        zeros = np.zeros_like(r_arr)
        coeffs = {
            "vv": H["H1"], "rr": H["H2"], "vr": H["H9"], "ang": H["H3"],
            "00": zeros, "0v": zeros.copy(), "0r": zeros.copy(),
        }
        return QuadraticForm("commuted", r_arr, l, coeffs)

    form = QuadraticForm("v_r", r_arr, l, _coefficients_vr(bg, V, r_arr))
    if chart == "t_rstar":
        if np.any(r_arr <= bg.r_plus):
            raise DomainError("the (t, r*) chart does not cover the horizon")
        form = form.in_tortoise_chart(bg)
    return form


@dataclass(frozen=True)
class PositivityReport:
    """
    Outcome of positivity_scan.

    Attributes:
        multiplier: Multiplier name
        chart: Chart of the scanned form
        min_eigenvalue: Smallest block eigenvalue over the samples
        witness_radius: Radius where it is attained
        min_angular: Smallest C_ang (None when the angular term is ignored)
        angular_witness: Radius of min_angular
        passed: Both minima >= -tol
        radii, eigenvalues: Sampled radii and (min, max) eigenvalues for CSV output
    """

    multiplier: str
    chart: str
    min_eigenvalue: float
    witness_radius: float
    min_angular: float | None
    angular_witness: float | None
    passed: bool
    tol: float
    radii: np.ndarray
    eigenvalues: tuple[np.ndarray, np.ndarray]

    def verdict(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        line = (
            f"{status} {self.multiplier} ({self.chart}): min eigenvalue "
            f"{self.min_eigenvalue:.3e} at r={self.witness_radius:.6g}"
        )
        if self.min_angular is not None:
            line += f", min C_ang {self.min_angular:.3e} at r={self.angular_witness:.6g}"
        return line


def positivity_scan(
    bg: BlackHoleBackground,
    V: MultiplierField,
    r_interval: tuple[float, float],
    samples: int = 10_000,
    l: int | None = None,
    chart: BulkChart = "v_r",
    commuted: bool = False,
    tol: float = 1e-12,
) -> PositivityReport:
    """
    Sample the derivative block of K^V and the angular coefficient.

    Args:
        bg: Background
        V: Multiplier
        r_interval: (r_lo, r_hi) inside the validity region
        samples: Number of equally spaced radii
        l: For l == 0 the angular coefficient is irrelevant and ignored;
            None means all modes
        chart: "v_r" or "t_rstar"
        commuted: Scan the commuted principal part instead
        tol: Tolerance of the pass verdict
    """
    if samples < 2:
        raise UsageError(f"samples must be at least 2, got {samples}")
    r = np.linspace(r_interval[0], r_interval[1], samples)
    form = bulk_form(bg, V, r, l=l or 0, chart=chart, commuted=commuted)
    lo, hi = form.eigenvalues()
    idx = int(np.argmin(lo))

    min_ang = ang_r = None
    ok = bool(lo[idx] >= -tol)
    if l != 0:
        ang = form["ang"]
        j = int(np.argmin(ang))
        min_ang, ang_r = float(ang[j]), float(r[j])
        ok = ok and min_ang >= -tol

    report = PositivityReport(
        multiplier=V.name,
        chart=form.chart,
        min_eigenvalue=float(lo[idx]),
        witness_radius=float(r[idx]),
        min_angular=min_ang,
        angular_witness=ang_r,
        passed=ok,
        tol=tol,
        radii=r,
        eigenvalues=(lo, hi),
    )
    logger.info(f"🔍 {report.verdict()}")
    return report
