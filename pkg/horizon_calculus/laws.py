# horizon_calculus/laws.py
"""
Conservation laws on the extreme horizon.

For each l there are exact constants beta_0..beta_l such that

    H_l[psi] = d_r^{l+1} psi + sum_i beta_i d_r^i psi

is constant along the horizon generators for every mode-l solution.
The constants come from triangular elimination: the identities with
k < l have a non-vanishing pivot (k(k+1) - l(l+1))/M^2 and express each
d_r^j psi through d_v-derivatives; substituting them into the k = l
identity, whose pivot vanishes, leaves d_v(2 H_l) = 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np
import numpy.typing as npt

from core.errors import UsageError
from .exact import ExactCoefficient
from .identities import HorizonIdentity, JetSymbol, restrict_commuted_wave, _check_order


@dataclass(frozen=True)
class ConservationLaw:
    """
    Coefficients of the conserved horizon quantity H_l.

    Attributes:
        l: Angular frequency
        betas: beta_0..beta_l; beta_i carries mass_power -(l+1-i)
        alphas: For each j < l, alphas[j][i] expresses
            d_r^j psi = sum_i alphas[j][i] d_v d_r^i psi on the horizon
    """

    l: int
    betas: tuple[ExactCoefficient, ...]
    alphas: tuple[tuple[ExactCoefficient, ...], ...] = ()

    @property
    def jet_count(self) -> int:
        """Number of horizon derivatives d_r^0..d_r^{l+1} the law needs."""
        return self.l + 2

    def numeric_betas(self, mass: float = 1.0) -> np.ndarray:
        return np.array([b.evaluate(mass) for b in self.betas])

    def evaluate(self, jets: Sequence[npt.ArrayLike], mass: float = 1.0):
        """
        Evaluate H_l from numeric horizon jets.

        Args:
            jets: Sequence whose entry i is d_r^i psi at the horizon
                (scalar or time series), at least l+2 entries
            mass: Numeric mass

        Raises:
            UsageError: Fewer than l+2 jets supplied
        """
        if len(jets) < self.jet_count:
            raise UsageError(
                f"H_{self.l} needs d_r^0..d_r^{self.l + 1}, got {len(jets)} orders"
            )
        total = np.asarray(jets[self.l + 1], dtype=float).copy()
        for i, beta in enumerate(self.numeric_betas(mass)):
            total = total + beta * np.asarray(jets[i], dtype=float)
        return float(total) if total.ndim == 0 else total

    def to_dict(self, mass: float = 1.0) -> dict:
        return {
            "l": self.l,
            "betas": [
                {"i": i, **b.to_dict(), "exact": str(b), "decimal": b.evaluate(mass)}
                for i, b in enumerate(self.betas)
            ],
            "alphas": [
                [{"i": i, **a.to_dict(), "exact": str(a)} for i, a in enumerate(row)]
                for row in self.alphas
            ],
        }


def _solve_for_radial(
    identity: HorizonIdentity, alphas: list[tuple[ExactCoefficient, ...]]
) -> tuple[ExactCoefficient, ...]:
    """Express d_r^k psi through d_v-jets using the already solved lower orders."""
    k = identity.k
    pivot = identity.pivot
    rhs = [identity.coefficient("dv", i) for i in range(k + 2)]
    for m in range(k):
        b_m = identity.coefficient("r", m)
        for i, a in enumerate(alphas[m]):
            rhs[i] = rhs[i] + b_m * a
    return tuple(-c / pivot for c in rhs)


@lru_cache(maxsize=None)
def derive_conservation_law(l: int) -> ConservationLaw:
    """
    Derive the exact conservation law for mode l.

    Args:
        l: Angular frequency, 0 <= l <= 32

    Returns:
        ConservationLaw with betas and the alpha table
    """
    _check_order("l", l)
    alphas: list[tuple[ExactCoefficient, ...]] = []
    for j in range(l):
        alphas.append(_solve_for_radial(restrict_commuted_wave(j, l), alphas))

    reduced = substitute_alphas(restrict_commuted_wave(l, l), alphas)
    lead = reduced.coefficient("dv", l + 1)
    betas = tuple(reduced.coefficient("dv", i) / lead for i in range(l + 1))
    return ConservationLaw(l=l, betas=betas, alphas=tuple(alphas))


def substitute_alphas(
    identity: HorizonIdentity, alphas: Sequence[Sequence[ExactCoefficient]]
) -> HorizonIdentity:
    """Replace every d_r^j psi with j < len(alphas) by its d_v expression."""
    coeffs = dict(identity.coefficients)
    for j, row in enumerate(alphas):
        key = JetSymbol("r", j)
        b_j = coeffs.pop(key, ExactCoefficient.zero())
        if b_j.is_zero:
            continue
        for i, a in enumerate(row):
            dv = JetSymbol("dv", i)
            coeffs[dv] = coeffs.get(dv, ExactCoefficient.zero()) + b_j * a
    return HorizonIdentity(k=identity.k, l=identity.l, coefficients=coeffs)


def substitute_law(law: ConservationLaw) -> HorizonIdentity:
    """The k = l identity after elimination; only d_v-jets remain nonzero."""
    return substitute_alphas(restrict_commuted_wave(law.l, law.l), law.alphas)


def format_law_table(law: ConservationLaw, mass: float = 1.0) -> str:
    """Plain-text table of i, beta_i exact, beta_i decimal."""
    lines = [
        f"H_{law.l}[psi] = d_r^{law.l + 1} psi + sum_i beta_i d_r^i psi   (M = {mass:g})",
        f"{'i':>3}  {'beta_i (exact)':<24}{'beta_i (decimal)':>24}",
    ]
    for i, beta in enumerate(law.betas):
        lines.append(f"{i:>3}  {str(beta):<24}{beta.evaluate(mass):>24.17g}")
    return "\n".join(lines)
