# currents/multipliers.py
"""
Multiplier vector fields V = f_v d_v + f_r d_r with optional modifications.

Component functions are held as sympy expressions in r for a concrete
background and compiled to numpy with lambdify; derivatives are exact.
A modified current is

    J = T(V, .) + g psi grad psi + h psi^2 grad w + phi psi^2 d_r*

where d_r* = d_v + D d_r. Cut-offs are C^2 quintic blends.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Callable, Literal

import numpy as np
import numpy.typing as npt
import sympy as sp

from core.errors import DomainError, UsageError
from geometry import BlackHoleBackground, photon_sphere

logger = logging.getLogger(__name__)

r_sym = sp.Symbol("r", positive=True)

ModificationKind = Literal["none", "first_kind", "second_kind", "redshift", "lagrangian"]

# Components compiled for numeric evaluation
_COMPILED_NAMES = (
    "f_v", "f_v_1", "f_r", "f_r_1",
    "g", "g_1", "h", "h_1", "w_1", "w_2", "phi", "phi_1",
)


@dataclass(frozen=True, eq=False)
class Modification:
    """Zeroth-order terms added to T(V, .)."""

    kind: ModificationKind = "none"
    g: sp.Expr = sp.Integer(0)
    h: sp.Expr = sp.Integer(0)
    w: sp.Expr = sp.Integer(0)
    phi: sp.Expr = sp.Integer(0)


@dataclass(frozen=True, eq=False)
class MultiplierField:
    """
    A multiplier with its modification and validity region.

    Attributes:
        name: Registry name (T, N, N_mod, P, X_alpha, X_d, X_0, L, lagrangian)
        bg: Background the expressions were built for
        f_v, f_r: (v, r) components as sympy expressions in r
        modification: Zeroth-order modification
        region: (r_lo, r_hi) where the field is defined
        open_at_horizon: True when r = r_plus itself is excluded
        params: Builder parameters
    """

    name: str
    bg: BlackHoleBackground
    f_v: sp.Expr
    f_r: sp.Expr
    modification: Modification = field(default_factory=Modification)
    region: tuple[float, float] = (0.0, math.inf)
    open_at_horizon: bool = False
    params: dict = field(default_factory=dict)

    @cached_property
    def _functions(self) -> dict[str, Callable]:
        m = self.modification
        exprs = {
            "f_v": self.f_v,
            "f_v_1": sp.diff(self.f_v, r_sym),
            "f_r": self.f_r,
            "f_r_1": sp.diff(self.f_r, r_sym),
            "g": m.g,
            "g_1": sp.diff(m.g, r_sym),
            "h": m.h,
            "h_1": sp.diff(m.h, r_sym),
            "w_1": sp.diff(m.w, r_sym),
            "w_2": sp.diff(m.w, r_sym, 2),
            "phi": m.phi,
            "phi_1": sp.diff(m.phi, r_sym),
        }
        return {name: sp.lambdify(r_sym, expr, "numpy") for name, expr in exprs.items()}

    def check_radius(self, r: npt.ArrayLike) -> np.ndarray:
        """
        Raises:
            DomainError: Any radius outside the validity region
        """
        arr = np.asarray(r, dtype=float)
        lo, hi = self.region
        below = arr <= lo if self.open_at_horizon else arr < lo - 1e-14 * max(1.0, lo)
        if np.any(below) or np.any(arr > hi):
            bracket = "(" if self.open_at_horizon else "["
            raise DomainError(
                f"multiplier {self.name} is defined on {bracket}{lo:.6g}, {hi:.6g}], "
                f"got r in [{arr.min():.6g}, {arr.max():.6g}]"
            )
        return arr

    def evaluate(self, r: npt.ArrayLike) -> dict[str, np.ndarray]:
        """Numeric components and derivatives (suffix _1, _2 = d/dr order)."""
        arr = self.check_radius(r)
        with np.errstate(divide="ignore", invalid="ignore"):
            return {
                name: np.broadcast_to(np.asarray(fn(arr), dtype=float), arr.shape).copy()
                for name, fn in self._functions.items()
            }

    def causal_character(self, r: npt.ArrayLike) -> np.ndarray:
        """g(V, V) = -D f_v^2 + 2 f_v f_r; non-positive where V is causal."""
        vals = self.evaluate(r)
        d = np.asarray(self.bg.D(np.asarray(r, dtype=float)))
        return -d * vals["f_v"] ** 2 + 2.0 * vals["f_v"] * vals["f_r"]

    def is_future_causal(self, r: npt.ArrayLike, tol: float = 1e-12) -> bool:
        vals = self.evaluate(r)
        return bool(np.all(vals["f_v"] > 0) and np.all(self.causal_character(r) <= tol))


# ============================================================================
# Symbolic building blocks
# ============================================================================

def potential_expr(bg: BlackHoleBackground) -> sp.Expr:
    m, e = sp.Float(bg.mass), sp.Float(bg.charge)
    return 1 - 2 * m / r_sym + e**2 / r_sym**2


def sqrt_potential_expr(bg: BlackHoleBackground) -> sp.Expr:
    """sqrt(D), written as 1 - M/r on the extreme background (regular at r = M)."""
    if bg.is_extreme:
        return 1 - sp.Float(bg.mass) / r_sym
    return sp.sqrt(potential_expr(bg))


def tortoise_expr(bg: BlackHoleBackground) -> sp.Expr:
    """r* as a sympy expression, normalised so r*(Q) = 0."""
    m = sp.Float(bg.mass)
    if bg.is_extreme:
        prim = r_sym + 2 * m * sp.log(r_sym - m) - m**2 / (r_sym - m)
    else:
        rp, rm = sp.Float(bg.r_plus), sp.Float(bg.r_minus)
        prim = r_sym + rp**2 / (rp - rm) * sp.log(r_sym - rp)
        if bg.r_minus > 0:
            prim -= rm**2 / (rp - rm) * sp.log(r_sym - rm)
    return prim - prim.subs(r_sym, sp.Float(photon_sphere(bg)))


def smooth_blend(inner: sp.Expr, outer: sp.Expr, a: float, b: float) -> sp.Expr:
    """inner for r <= a, outer for r >= b, quintic smoothstep (C^2) between."""
    x = (r_sym - a) / (b - a)
    s = x**3 * (10 - 15 * x + 6 * x**2)
    return sp.Piecewise(
        (inner, r_sym <= a),
        (inner + (outer - inner) * s, r_sym <= b),
        (outer, True),
    )


def first_kind(bg: BlackHoleBackground, f: sp.Expr) -> Modification:
    """
    Modification of X = f d_r* removing the (d_t psi)^2 term of K:
    g = 2G, h = 1, w = -G with G = f'/4 + f D / (2r), f' = df/dr*.
    """
    d = potential_expr(bg)
    f_star = d * sp.diff(f, r_sym)
    big_g = f_star / 4 + f * d / (2 * r_sym)
    return Modification(kind="first_kind", g=2 * big_g, h=sp.Integer(1), w=-big_g)


def _radial_field(bg: BlackHoleBackground, f: sp.Expr) -> tuple[sp.Expr, sp.Expr]:
    """Components of f d_r* = f d_v + f D d_r."""
    return f, f * potential_expr(bg)


def _require_extreme(bg: BlackHoleBackground, name: str) -> None:
    if not bg.is_extreme:
        raise DomainError(f"multiplier {name} is defined on the extreme background only")


# ============================================================================
# Builders
# ============================================================================

def _build_t(bg, **_):
    return MultiplierField("T", bg, sp.Integer(1), sp.Integer(0), region=(bg.r_plus, math.inf))


def _n_components(bg):
    m = sp.Float(bg.mass)
    a, b = 9 * bg.mass / 8, 8 * bg.mass / 7
    f_v = smooth_blend(16 * r_sym, sp.Integer(1), a, b)
    f_r = smooth_blend(-sp.Rational(3, 2) * r_sym + m, sp.Integer(0), a, b)
    return f_v, f_r, a, b


def _build_n(bg, **_):
    f_v, f_r, _, _ = _n_components(bg)
    return MultiplierField("N", bg, f_v, f_r, region=(bg.r_plus, math.inf))


def _build_n_mod(bg, h_value: float = -0.5, **_):
    f_v, f_r, a, b = _n_components(bg)
    delta = smooth_blend(sp.Integer(1), sp.Integer(0), a, b)
    mod = Modification(kind="redshift", g=sp.Float(h_value) * delta)
    return MultiplierField(
        "N_mod", bg, f_v, f_r, modification=mod, region=(bg.r_plus, math.inf),
        params={"h_value": h_value},
    )


def _build_p(bg, **_):
    _require_extreme(bg, "P")
    a, b = 9 * bg.mass / 8, 8 * bg.mass / 7
    f_v = smooth_blend(16 * r_sym, sp.Integer(1), a, b)
    f_r = smooth_blend(-sqrt_potential_expr(bg), sp.Integer(0), a, b)
    return MultiplierField("P", bg, f_v, f_r, region=(bg.r_plus, math.inf))


def _build_l(bg, r0: float | None = None, r1: float | None = None, **_):
    _require_extreme(bg, "L")
    m = sp.Float(bg.mass)
    r0 = 9 * bg.mass / 8 if r0 is None else r0
    r1 = 5 * bg.mass / 4 if r1 is None else r1
    f_v = smooth_blend(16 * r_sym, sp.Integer(0), r0, r1)
    f_r = smooth_blend(-sp.Rational(11, 10) - 60 * (r_sym - m) / m, sp.Integer(0), r0, r1)
    return MultiplierField("L", bg, f_v, f_r, region=(bg.r_plus, math.inf), params={"r0": r0, "r1": r1})


def _build_x0(bg, **_):
    f_v, f_r = _radial_field(bg, -1 / r_sym**3)
    return MultiplierField("X_0", bg, f_v, f_r, region=(bg.r_plus, math.inf))


def _build_x_alpha(bg, alpha: float = 1.0, kind: str = "second_kind", **_):
    if alpha <= 0:
        raise UsageError(f"alpha must be positive, got {alpha}")
    if kind not in ("first_kind", "second_kind"):
        raise UsageError(f"Invalid kind: {kind}. Must be one of: first_kind, second_kind")
    al = sp.Float(alpha)
    x = tortoise_expr(bg) - al - sp.sqrt(al)
    x0 = -al - sp.sqrt(al)
    f = (sp.atan(x / al) - sp.atan(x0 / al)) / al
    mod = first_kind(bg, f)
    if kind == "second_kind":
        d = potential_expr(bg)
        beta = d / r_sym - x / (al**2 + x**2)
        mod = Modification(
            kind="second_kind", g=mod.g, h=mod.h, w=mod.w,
            phi=sp.diff(f, r_sym) * beta,
        )
    f_v, f_r = _radial_field(bg, f)
    return MultiplierField(
        "X_alpha", bg, f_v, f_r, modification=mod, region=(bg.r_plus, math.inf),
        open_at_horizon=True, params={"alpha": alpha, "kind": kind},
    )


def _build_x_d(bg, **_):
    f = sp.atan(tortoise_expr(bg))
    f_v, f_r = _radial_field(bg, f)
    return MultiplierField(
        "X_d", bg, f_v, f_r, modification=first_kind(bg, f),
        region=(bg.r_plus, math.inf), open_at_horizon=True,
    )


def _build_lagrangian(bg, **_):
    weight = sqrt_potential_expr(bg) ** 3 / r_sym**3
    mod = Modification(kind="lagrangian", g=weight)
    return MultiplierField(
        "lagrangian", bg, sp.Integer(0), sp.Integer(0), modification=mod,
        region=(bg.r_plus, math.inf),
    )


MULTIPLIER_BUILDERS: dict[str, Callable[..., MultiplierField]] = {
    "T": _build_t,
    "N": _build_n,
    "N_mod": _build_n_mod,
    "P": _build_p,
    "L": _build_l,
    "X_0": _build_x0,
    "X_alpha": _build_x_alpha,
    "X_d": _build_x_d,
    "lagrangian": _build_lagrangian,
}


@lru_cache(maxsize=64)
def _cached_build(bg: BlackHoleBackground, name: str, params: tuple) -> MultiplierField:
    logger.debug(f"Building multiplier {name} with {dict(params)}")
    return MULTIPLIER_BUILDERS[name](bg, **dict(params))


def build_multiplier(bg: BlackHoleBackground, name: str, **params) -> MultiplierField:
    """
    Construct a registered multiplier for a background.

    Args:
        bg: Background
        name: One of T, N, N_mod, P, L, X_0, X_alpha, X_d, lagrangian
        **params: Builder parameters (alpha and kind for X_alpha,
            r0 and r1 for L, h_value for N_mod)

    Raises:
        UsageError: Unknown name
        DomainError: Extreme-only multiplier on a subextreme background
    """
    if name not in MULTIPLIER_BUILDERS:
        raise UsageError(
            f"Invalid multiplier: {name}. Must be one of: {', '.join(MULTIPLIER_BUILDERS)}"
        )
    return _cached_build(bg, name, tuple(sorted(params.items())))
