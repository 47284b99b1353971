# horizon_calculus/identities.py
"""
Horizon identities of the commuted wave equation.

Applying d^k/dr^k to the mode-l wave equation in (v, r) coordinates,

    D psi_rr + 2 psi_vr + (2/r) psi_v + R psi_r - l(l+1) psi / r^2 = 0,

and restricting to r = M on the extreme background gives an identity
between the horizon jets d_v d_r^i psi (i <= k+1) and d_r^j psi (j <= k).
D(M) = D'(M) = R(M) = 0 remove every d_r^{k+1} and d_r^{k+2} term.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal, get_args

from core.errors import UsageError
from .exact import ExactCoefficient

JetKind = Literal["dv", "r"]
BackgroundSymbol = Literal["D", "R", "2/r", "r^-2"]

BACKGROUND_SYMBOLS: tuple[str, ...] = get_args(BackgroundSymbol)

MAX_ORDER = 32
MAX_JET_ORDER = 2 * MAX_ORDER + 4


@dataclass(frozen=True, order=True)
class JetSymbol:
    """d_v d_r^order psi (kind "dv") or d_r^order psi (kind "r") on the horizon."""

    kind: JetKind
    order: int

    def __str__(self) -> str:
        radial = "" if self.order == 0 else ("dr " if self.order == 1 else f"dr^{self.order} ")
        prefix = "dv " if self.kind == "dv" else ""
        return f"{prefix}{radial}psi"


def background_horizon_jet(symbol: BackgroundSymbol, order: int) -> ExactCoefficient:
    """
    Exact order-th r-derivative at r = M of a background function.

    Uses the extreme potential D = (1 - M/r)^2 and R = 2/r - 2M/r^2.

    Args:
        symbol: One of "D", "R", "2/r", "r^-2"
        order: Derivative order i >= 0

    Returns:
        The derivative value as a multiple of a power of M

    Raises:
        UsageError: Unknown symbol or order out of range
    """
    if symbol not in BACKGROUND_SYMBOLS:
        raise UsageError(
            f"Invalid symbol: {symbol}. Must be one of: {', '.join(BACKGROUND_SYMBOLS)}"
        )
    if not 0 <= order <= MAX_JET_ORDER:
        raise UsageError(f"order must lie in [0, {MAX_JET_ORDER}], got {order}")

    sign = -1 if order % 2 else 1
    fact = math.factorial(order)
    if symbol == "D":
        return ExactCoefficient(Fraction(sign * fact * (order - 1) if order else 0), -order)
    if symbol == "R":
        return ExactCoefficient(Fraction(-2 * order * sign * fact), -1 - order)
    if symbol == "2/r":
        return ExactCoefficient(Fraction(2 * sign * fact), -1 - order)
    return ExactCoefficient(Fraction(sign * math.factorial(order + 1)), -2 - order)


@dataclass(frozen=True)
class HorizonIdentity:
    """
    0 = sum of coefficient * jet, holding on the horizon for mode l.

    Attributes:
        k: Commutation order
        l: Angular frequency
        coefficients: Jet symbol -> exact coefficient
    """

    k: int
    l: int
    coefficients: dict[JetSymbol, ExactCoefficient] = field(default_factory=dict)

    def coefficient(self, kind: JetKind, order: int) -> ExactCoefficient:
        return self.coefficients.get(JetSymbol(kind, order), ExactCoefficient.zero())

    @property
    def pivot(self) -> ExactCoefficient:
        """Coefficient of d_r^k psi."""
        return self.coefficient("r", self.k)

    def nonzero_terms(self) -> list[tuple[JetSymbol, ExactCoefficient]]:
        return [(s, c) for s, c in sorted(self.coefficients.items()) if not c.is_zero]

    def __str__(self) -> str:
        terms = [f"({c}) {s}" for s, c in self.nonzero_terms()]
        return " + ".join(terms) + " = 0" if terms else "0 = 0"


def _check_order(name: str, value: int) -> None:
    if not 0 <= value <= MAX_ORDER:
        raise UsageError(f"{name} must lie in [0, {MAX_ORDER}], got {value}")


def restrict_commuted_wave(k: int, l: int) -> HorizonIdentity:
    """
    Restrict the k-times r-commuted mode-l wave equation to the horizon.

    Args:
        k: Commutation order, 0 <= k <= 32
        l: Angular frequency, 0 <= l <= 32

    Returns:
        HorizonIdentity with every symbol d_v d_r^i psi (i <= k+1) and
        d_r^j psi (j <= k) present, zero coefficients included
    """
    _check_order("k", k)
    _check_order("l", l)

    coeffs: dict[JetSymbol, ExactCoefficient] = {JetSymbol("dv", i): ExactCoefficient.zero() for i in range(k + 2)}
    coeffs.update({JetSymbol("r", j): ExactCoefficient.zero() for j in range(k + 1)})

    def add(kind: JetKind, order: int, value: ExactCoefficient) -> None:
        key = JetSymbol(kind, order)
        if key not in coeffs:
            # only reachable through D, D', R, which vanish at r = M
            if not value.is_zero:
                raise AssertionError(f"unexpected horizon term {key}")
            return
        coeffs[key] = coeffs[key] + value

    angular = ExactCoefficient(Fraction(-l * (l + 1)))
    add("dv", k + 1, ExactCoefficient(Fraction(2)))
    for i in range(k + 1):
        binom = math.comb(k, i)
        add("dv", k - i, binom * background_horizon_jet("2/r", i))
        add("r", k - i + 2, binom * background_horizon_jet("D", i))
        add("r", k - i + 1, binom * background_horizon_jet("R", i))
        add("r", k - i, binom * angular * background_horizon_jet("r^-2", i))
    return HorizonIdentity(k=k, l=l, coefficients=coeffs)
