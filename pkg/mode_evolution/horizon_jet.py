# mode_evolution/horizon_jet.py
"""
Transversal horizon derivatives d_r^k psi at fixed v from a single slice.

Expanding (d_r|_t* - d_t*)^k by the binomial theorem (the coefficients
depend on r only, so the two derivatives commute) leaves d_r-derivatives
of Psi_m = d_t*^m psi at r = r_plus. Psi_0 = psi and Psi_1 = Pi are
interpolated on the first nodes; higher Psi_m follow from the evolution
equation applied to truncated Taylor series, with the background
coefficients expanded exactly about r_plus. The whole map is linear in
the sampled data and is precomputed as one small matrix.
"""

from __future__ import annotations

import math

import numpy as np

from core.errors import UsageError
from geometry import BlackHoleBackground, metric_jet, radial_jet
from .grid import ModeField


def _series_mul(coeff: np.ndarray, block: np.ndarray) -> np.ndarray:
    """Truncated product of a scalar series with a block of series (rows = powers)."""
    n = block.shape[0]
    out = np.zeros_like(block)
    for j in range(n):
        if coeff[j] != 0.0:
            out[j:] += coeff[j] * block[: n - j]
    return out


def _series_diff(block: np.ndarray) -> np.ndarray:
    out = np.zeros_like(block)
    powers = np.arange(1, block.shape[0])[:, None]
    out[:-1] = powers * block[1:]
    return out


def _series_reciprocal(a: np.ndarray) -> np.ndarray:
    b = np.zeros_like(a)
    b[0] = 1.0 / a[0]
    for n in range(1, len(a)):
        b[n] = -np.dot(a[1 : n + 1], b[n - 1 :: -1][:n]) / a[0]
    return b


class HorizonJetOperator:
    """
    Linear map from the first `width` nodes of (psi, Pi) to the horizon jets
    d_r^k psi|_v, k = 0..max_order.

    Args:
        bg: Background
        l: Angular frequency
        h: Grid spacing
        max_order: Highest transversal derivative order K
        accuracy: Target order of accuracy in h; width = K + accuracy
    """

    def __init__(
        self,
        bg: BlackHoleBackground,
        l: int,
        h: float,
        max_order: int,
        accuracy: int = 2,
    ):
        if max_order < 0:
            raise UsageError(f"max_order must be non-negative, got {max_order}")
        self.bg = bg
        self.l = l
        self.h = h
        self.max_order = max_order
        self.width = max(max_order + accuracy, 2)
        self.matrix = self._build()

    def _coefficient_series(self, n: int) -> list[np.ndarray]:
        rp, h = self.bg.r_plus, self.h
        scale = np.array([h**k / math.factorial(k) for k in range(n)])
        d = np.array([float(metric_jet(self.bg, rp, k)) for k in range(n)]) * scale
        rr = np.array([float(radial_jet(self.bg, rp, k)) for k in range(n)]) * scale
        q = -h / rp
        two_over_r = 2.0 / rp * q ** np.arange(n)
        inv_r2 = (np.arange(n) + 1.0) * q ** np.arange(n) / rp**2

        lapse = -d.copy()
        lapse[0] += 2.0
        inv_lapse = _series_reciprocal(lapse)
        one = np.zeros(n)
        one[0] = 1.0

        def times(a, b):
            return np.convolve(a, b)[:n]

        ll1 = self.l * (self.l + 1)
        return [
            times(2.0 * one - 2.0 * d, inv_lapse),      # d_r Q
            times(d, inv_lapse),                        # d_rr P
            times(two_over_r - rr, inv_lapse),          # Q
            times(rr, inv_lapse),                       # d_r P
            -ll1 * times(inv_r2, inv_lapse),            # P
        ]

    def _build(self) -> np.ndarray:
        w, h, big_k = self.width, self.h, self.max_order
        nodes = np.arange(w, dtype=float)
        vinv = np.linalg.inv(np.vander(nodes, increasing=True))

        c_dq, c_ddp, c_q, c_dp, c_p = self._coefficient_series(w)
        psi_series = [
            np.hstack([vinv, np.zeros((w, w))]),
            np.hstack([np.zeros((w, w)), vinv]),
        ]
        for _ in range(2, big_k + 1):
            p, q = psi_series[-2], psi_series[-1]
            dp = _series_diff(p) / h
            ddp = _series_diff(dp) / h
            dq = _series_diff(q) / h
            psi_series.append(
                _series_mul(c_dq, dq) + _series_mul(c_ddp, ddp) + _series_mul(c_q, q)
                + _series_mul(c_dp, dp) + _series_mul(c_p, p)
            )

        rows = np.zeros((big_k + 1, 2 * w))
        for k in range(big_k + 1):
            for m in range(k + 1):
                j = k - m
                factor = math.comb(k, m) * (-1) ** m * math.factorial(j) / h**j
                rows[k] += factor * psi_series[m][j]
        return rows

    def __call__(self, psi: np.ndarray, pi: np.ndarray) -> np.ndarray:
        w = self.width
        return self.matrix @ np.concatenate([psi[:w], pi[:w]])

    def of_field(self, field: ModeField) -> np.ndarray:
        return self(field.psi, field.pi)
