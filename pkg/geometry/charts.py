# geometry/charts.py
"""
Coordinate charts of the exterior and the mode-reduced wave operator.

Chart tags:
    t_r      Schwarzschild-type (t, r)
    t_rstar  tortoise (t, r*)
    v_r      ingoing Eddington-Finkelstein (v, r), regular on the horizon
    u_v      double null (u, v)
    tstar_r  slice time t* = v - r with r, regular on the horizon

Every conversion passes through the canonical (v, r) pair, using
v = t + r*, u = t - r* and t* = v - r.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, get_args

from core.errors import DomainError, UsageError
from .background import BlackHoleBackground, metric_potential, radial_coefficient
from .tortoise import tortoise, tortoise_inverse

ChartTag = Literal["t_r", "t_rstar", "v_r", "u_v", "tstar_r"]

CHART_TAGS: tuple[str, ...] = get_args(ChartTag)

# Charts that reach the horizon itself
HORIZON_REGULAR: frozenset[str] = frozenset({"v_r", "tstar_r"})


@dataclass(frozen=True)
class ChartPoint:
    """A point given by two coordinates in a named chart (units of M)."""

    chart: ChartTag
    first: float
    second: float

    def __post_init__(self):
        _check_chart(self.chart)


def _check_chart(chart: str) -> None:
    if chart not in CHART_TAGS:
        raise UsageError(
            f"Invalid chart: {chart}. Must be one of: {', '.join(CHART_TAGS)}"
        )


def _to_ingoing(bg: BlackHoleBackground, p: ChartPoint) -> tuple[float, float]:
    a, b = p.first, p.second
    if p.chart == "v_r":
        v, r = a, b
    elif p.chart == "tstar_r":
        v, r = a + b, b
    elif p.chart == "t_r":
        if not b > bg.r_plus:
            raise DomainError(f"(t, r) chart requires r > r_plus, got r = {b}")
        v, r = a + tortoise(bg, b), b
    elif p.chart == "t_rstar":
        v, r = a + b, tortoise_inverse(bg, b)
    else:  # u_v
        v, r = b, tortoise_inverse(bg, 0.5 * (b - a))
    if r < bg.r_plus:
        raise DomainError(f"point lies inside the horizon (r = {r} < {bg.r_plus})")
    return v, r


def _from_ingoing(bg: BlackHoleBackground, v: float, r: float, target: str) -> ChartPoint:
    if target == "v_r":
        return ChartPoint("v_r", v, r)
    if target == "tstar_r":
        return ChartPoint("tstar_r", v - r, r)
    if not r > bg.r_plus:
        raise DomainError(
            f"point on the horizon (r = {r}) cannot be expressed in chart {target}"
        )
    rstar = tortoise(bg, r)
    if target == "t_r":
        return ChartPoint("t_r", v - rstar, r)
    if target == "t_rstar":
        return ChartPoint("t_rstar", v - rstar, rstar)
    return ChartPoint("u_v", v - 2.0 * rstar, v)


def chart_convert(bg: BlackHoleBackground, p: ChartPoint, target: ChartTag) -> ChartPoint:
    """
    Convert a point between charts.

    Args:
        bg: Background
        p: Point in its source chart
        target: Destination chart tag

    Returns:
        The same event in the target chart

    Raises:
        UsageError: Unknown chart tag
        DomainError: Point inside the horizon, or on the horizon with a
            target chart that involves t or r*
    """
    _check_chart(target)
    if p.chart == target:
        return p
    v, r = _to_ingoing(bg, p)
    return _from_ingoing(bg, v, r, target)


def wave_operator_coefficients(
    bg: BlackHoleBackground, chart: ChartTag, r: float, l: int
) -> dict[str, float]:
    """
    Coefficients of the mode-l wave operator in a chart.

    Keys name the derivative each coefficient multiplies, e.g. in v_r:
    D psi_rr + 2 psi_vr + (2/r) psi_v + R psi_r - l(l+1)/r^2 psi.
    The u_v chart acts on phi = r psi with phi_uv + V phi = 0.

    Raises:
        UsageError: Unknown chart tag or negative l
        DomainError: r outside the chart's domain
    """
    _check_chart(chart)
    if l < 0:
        raise UsageError(f"l must be non-negative, got {l}")
    if chart in HORIZON_REGULAR:
        if r < bg.r_plus:
            raise DomainError(f"chart {chart} requires r >= r_plus, got {r}")
    elif not r > bg.r_plus:
        raise DomainError(f"chart {chart} requires r > r_plus, got {r}")

    d = metric_potential(bg, r)
    rr = radial_coefficient(bg, r)
    angular = -l * (l + 1) / r**2

    if chart == "v_r":
        return {"psi_rr": d, "psi_vr": 2.0, "psi_v": 2.0 / r, "psi_r": rr, "psi": angular}
    if chart == "tstar_r":
        return {
            "psi_tt": d - 2.0,
            "psi_tr": 2.0 - 2.0 * d,
            "psi_rr": d,
            "psi_t": 2.0 / r - rr,
            "psi_r": rr,
            "psi": angular,
        }
    if chart == "t_r":
        return {"psi_tt": -1.0 / d, "psi_rr": d, "psi_r": rr, "psi": angular}
    if chart == "t_rstar":
        return {"psi_tt": -1.0 / d, "psi_ss": 1.0 / d, "psi_s": 2.0 / r, "psi": angular}
    d1 = metric_potential(bg, r, 1)
    return {"phi_uv": 1.0, "phi": 0.25 * d * (d1 / r + l * (l + 1) / r**2)}
