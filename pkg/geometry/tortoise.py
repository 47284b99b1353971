# geometry/tortoise.py
"""
Tortoise coordinate r* with dr*/dr = 1/D, normalised so r*(Q) = 0.

Extreme:     r* = r + 2M ln(r - M) - M^2/(r - M) + C
Subextreme:  r* = r + A ln(r - r+) + B ln(r - r-) + C,
             A = r+^2/(r+ - r-) = 1/(2 kappa+),  B = -r-^2/(r+ - r-)

The inverse is solved in the log-offset x = ln(r - r+), where r* is
smooth and monotone over the whole real line.
"""

from __future__ import annotations

import math

import numpy as np
import numpy.typing as npt
from scipy.optimize import brentq

from core.errors import DomainError, NumericalError
from .background import BlackHoleBackground, photon_sphere

_MAX_BRACKET_STEPS = 200


def _primitive_from_log_offset(bg: BlackHoleBackground, x: float) -> float:
    """Unnormalised r* as a function of x = ln(r - r+)."""
    y = math.exp(x)
    if bg.is_extreme:
        m = bg.mass
        return m + y + 2.0 * m * x - m * m * math.exp(-x)
    gap = bg.r_plus - bg.r_minus
    a = bg.r_plus**2 / gap
    value = bg.r_plus + y + a * x
    if bg.r_minus > 0:
        b = -(bg.r_minus**2) / gap
        value += b * math.log(y + gap)
    return value


def _offset_constant(bg: BlackHoleBackground) -> float:
    q = photon_sphere(bg)
    return _primitive_from_log_offset(bg, math.log(q - bg.r_plus))


def _tortoise_scalar(bg: BlackHoleBackground, r: float) -> float:
    y = r - bg.r_plus
    if not y > 0:
        raise DomainError(f"tortoise requires r > r_plus = {bg.r_plus}, got r = {r}")
    return _primitive_from_log_offset(bg, math.log(y)) - _offset_constant(bg)


def tortoise(bg: BlackHoleBackground, r: npt.ArrayLike):
    """
    Tortoise coordinate r*(r).

    Args:
        bg: Background
        r: Radius or array of radii, strictly outside r_plus

    Returns:
        r*(r), same shape as r

    Raises:
        DomainError: If any r <= r_plus
    """
    arr = np.asarray(r, dtype=float)
    if np.any(~(arr > bg.r_plus)):
        raise DomainError(
            f"tortoise requires r > r_plus = {bg.r_plus}, got min r = {np.min(arr)}"
        )
    if arr.ndim == 0:
        return _tortoise_scalar(bg, float(arr))
    shift = _offset_constant(bg)
    flat = [_primitive_from_log_offset(bg, math.log(v - bg.r_plus)) - shift for v in arr.ravel()]
    return np.asarray(flat).reshape(arr.shape)


def _invert_scalar(bg: BlackHoleBackground, rstar: float) -> float:
    target = rstar + _offset_constant(bg)

    def residual(x: float) -> float:
        return _primitive_from_log_offset(bg, x) - target

    lo, hi = -1.0, 1.0
    step = 1.0
    for _ in range(_MAX_BRACKET_STEPS):
        if residual(lo) <= 0:
            break
        lo -= step
        step *= 2.0
    else:
        raise NumericalError(f"could not bracket r*={rstar} from below")
    step = 1.0
    for _ in range(_MAX_BRACKET_STEPS):
        if residual(hi) >= 0:
            break
        hi += step
        step *= 2.0
    else:
        raise NumericalError(f"could not bracket r*={rstar} from above")

    try:
        x = brentq(residual, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=500)
    except (RuntimeError, ValueError) as exc:
        raise NumericalError(f"tortoise inversion failed for r*={rstar}: {exc}") from exc
    return bg.r_plus + math.exp(x)


def tortoise_inverse(bg: BlackHoleBackground, rstar: npt.ArrayLike):
    """
    Radius r with r*(r) = rstar.

    Args:
        bg: Background
        rstar: Tortoise coordinate (scalar or array), any real value

    Returns:
        r > r_plus, same shape as rstar

    Raises:
        NumericalError: If the root cannot be bracketed or converged
    """
    arr = np.asarray(rstar, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise NumericalError("tortoise_inverse requires finite input")
    if arr.ndim == 0:
        return _invert_scalar(bg, float(arr))
    return np.asarray([_invert_scalar(bg, v) for v in arr.ravel()]).reshape(arr.shape)
