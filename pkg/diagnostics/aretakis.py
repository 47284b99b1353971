# diagnostics/aretakis.py
"""
Horizon conservation laws, non-decay and blow-up along the horizon.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from core.errors import DomainError, UsageError
from horizon_calculus import ConservationLaw
from mode_evolution import HorizonTrace

from .series import HorizonSeries, RateFit, fit_power_law, late_window

logger = logging.getLogger(__name__)

DRIFT_FLOOR = 1e-14
GENERIC_THRESHOLD = 1e-8


@dataclass(frozen=True, eq=False)
class AretakisSeries(HorizonSeries):
    """H_l along the horizon with its drift relative to t* = 0."""

    l: int = 0
    drift: float = 0.0

    @property
    def initial_value(self) -> float:
        return float(self.values[0])


def relative_drift(values: np.ndarray, amplitude: float = 1.0) -> float:
    """max |H(t) - H(0)| / max(|H(0)|, 1e-14 * amplitude)."""
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        return 0.0
    scale = max(abs(values[0]), DRIFT_FLOOR * abs(amplitude))
    if scale == 0.0:
        return 0.0
    return float(np.max(np.abs(values - values[0])) / scale)


def is_generic(initial_value: float, amplitude: float = 1.0) -> bool:
    return abs(initial_value) >= GENERIC_THRESHOLD * abs(amplitude)


def require_generic(initial_value: float, amplitude: float, l: int) -> None:
    """
    Raises:
        DomainError: |H_l(0)| below 1e-8 times the data amplitude
    """
    if not is_generic(initial_value, amplitude):
        raise DomainError(
            f"non-generic data: |H_{l}(0)| = {abs(initial_value):.3e} "
            f"< {GENERIC_THRESHOLD:.0e} * amplitude {abs(amplitude):.3e}"
        )


def aretakis_series(
    trace: HorizonTrace,
    law: ConservationLaw,
    mass: float,
    amplitude: float = 1.0,
) -> AretakisSeries:
    """
    H_l(t*) = d_r^{l+1} psi + sum_i beta_i d_r^i psi on the horizon.

    Off extremality the same combination is a pseudo-quantity with no
    conservation property.

    Args:
        trace: Horizon trace with d_r^0..d_r^{l+1}
        law: Law for the trace's mode
        mass: Background mass M used in the coefficients (not r_plus, which
            equals M only at extremality)
        amplitude: Data amplitude scale for the drift floor

    Raises:
        UsageError: Trace lacks the needed orders or law is for another mode
    """
    if law.l != trace.l:
        raise UsageError(f"law is for l={law.l}, trace is for l={trace.l}")
    jets = [trace.derivative(i) for i in range(law.l + 2)]
    values = np.asarray(law.evaluate(jets, mass), dtype=float)
    drift = relative_drift(values, amplitude)
    logger.debug(f"H_{law.l}(0)={values[0]:.6e}, drift={drift:.3e}")
    return AretakisSeries(
        times=trace.times, values=values, label=f"H_{law.l}", l=law.l, drift=drift
    )


def horizon_derivative_series(trace: HorizonTrace, k: int) -> HorizonSeries:
    """d_r^k psi at the horizon as a series."""
    return HorizonSeries(trace.times, trace.derivative(k), label=f"d_r^{k} psi")


def expected_blowup_exponent(l: int, k: int) -> int:
    """Growth rate of d_r^k psi on the horizon for k >= l+1 (0 means non-decay)."""
    return k - l - 1


def blowup_slope(
    trace: HorizonTrace,
    l: int,
    k: int,
    window: tuple[float, float] | None = None,
    amplitude: float = 1.0,
    law: ConservationLaw | None = None,
    mass: float | None = None,
) -> RateFit:
    """
    Late-time log-log slope of |d_r^k psi| on the horizon.

    For generic data the slope approaches k - l - 1.

    Raises:
        UsageError: k exceeds the recorded orders, k < l+1, or law without mass
        DomainError: H_l(0) vanishes (non-generic data)
    """
    if k < l + 1:
        raise UsageError(f"blow-up concerns k >= l+1, got k={k} for l={l}")
    series = horizon_derivative_series(trace, k)
    if law is not None:
        if mass is None:
            raise UsageError("blowup_slope needs the background mass together with law")
        h0 = float(aretakis_series(trace, law, mass, amplitude).values[0])
        require_generic(h0, amplitude, l)
    elif trace.h_values is not None:
        require_generic(float(trace.h_values[0]), amplitude, l)
    window = late_window(float(trace.times[-1])) if window is None else window
    fit = fit_power_law(series, window)
    logger.info(
        f"📈 d_r^{k} psi slope {fit.exponent:.3f} (expected {expected_blowup_exponent(l, k)})"
    )
    return fit
