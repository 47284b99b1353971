"""
Analyze check runners.

Every runner takes an EvolutionResult, the request parameters and the
tolerance, and returns a CheckOutcome. run_check resolves names through
CHECK_REGISTRY.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from core.errors import UsageError
from currents import higher_order_energy
from diagnostics import (
    HorizonSeries,
    aretakis_series,
    blowup_slope,
    energy_balance,
    energy_timeseries,
    expected_blowup_exponent,
    fit_power_law,
    hardy_check,
    late_window,
    require_generic,
)
from horizon_calculus import derive_conservation_law
from mode_evolution import EvolutionResult

from ..config.check_registry import CHECK_REGISTRY

logger = logging.getLogger(__name__)

# |psi(t*, M)| t*^a is non-increasing late, per mode
POINTWISE_WEIGHTS = {0: 3.0 / 5.0, 1: 3.0 / 4.0, 2: 1.0}


@dataclass
class CheckOutcome:
    """Result of one check plus the columns of its companion CSV."""

    check: str
    passed: bool
    measured: float | None
    expected: str
    tolerance: float
    columns: dict[str, np.ndarray] = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    def verdict(self) -> dict:
        measured = self.measured
        if measured is not None and not math.isfinite(measured):
            measured = None
        out = {
            "check": self.check,
            "pass": bool(self.passed),
            "measured": measured,
            "expected": self.expected,
            "tolerance": self.tolerance,
        }
        if self.details:
            out["details"] = self.details
        return out


def _amplitude(result: EvolutionResult) -> float:
    if result.initial is not None:
        return abs(result.initial.amplitude)
    peak = float(np.max(np.abs(result.initial_field.psi)))
    return peak if peak > 0 else 1.0


def _law_series(result: EvolutionResult):
    law = result.law or derive_conservation_law(result.l)
    return aretakis_series(result.trace, law, mass=result.bg.mass, amplitude=_amplitude(result))


def _window(result: EvolutionResult, params: dict) -> tuple[float, float]:
    if "window" in params:
        lo, hi = params["window"]
        return float(lo), float(hi)
    return late_window(float(result.trace.times[-1]))


# ============================================================================
# Runners
# ============================================================================

def check_h_drift(result: EvolutionResult, params: dict, tol: float) -> CheckOutcome:
    series = _law_series(result)
    require_generic(series.initial_value, _amplitude(result), result.l)
    return CheckOutcome(
        check="h_drift",
        passed=series.drift <= tol,
        measured=series.drift,
        expected=f"drift of H_{result.l} <= {tol}",
        tolerance=tol,
        columns={"tstar": series.times, f"H_{result.l}": series.values},
        details={"H_initial": series.initial_value},
    )


def check_non_decay(result: EvolutionResult, params: dict, tol: float) -> CheckOutcome:
    l, trace = result.l, result.trace
    series = _law_series(result)
    require_generic(series.initial_value, _amplitude(result), l)
    window = _window(result, params)
    keep = (trace.times >= window[0]) & (trace.times <= window[1])
    top = trace.derivative(l + 1)
    gap = float(np.max(np.abs(top[keep] - series.values[keep]) / np.abs(series.values[keep])))

    lower = {}
    for i in range(l + 1):
        lower[f"d_r^{i} psi"] = fit_power_law(
            HorizonSeries(trace.times, trace.derivative(i), label=f"d_r^{i} psi"), window
        ).exponent
    decaying = all(p < 0 for p in lower.values())
    return CheckOutcome(
        check="non_decay",
        passed=gap <= tol and decaying,
        measured=gap,
        expected=f"|d_r^{l + 1} psi - H_{l}| / |H_{l}| <= {tol} late; lower orders decay",
        tolerance=tol,
        columns={"tstar": trace.times, f"dr{l + 1}": top, f"H_{l}": series.values},
        details={"lower_order_exponents": lower, "window": list(window)},
    )


def check_blowup_slope(result: EvolutionResult, params: dict, tol: float) -> CheckOutcome:
    l = result.l
    k = int(params.get("k", l + 2))
    law = result.law or derive_conservation_law(l)
    fit = blowup_slope(
        result.trace, l, k, window=_window(result, params), amplitude=_amplitude(result),
        law=law, mass=result.bg.mass,
    )
    target = expected_blowup_exponent(l, k)
    return CheckOutcome(
        check="blowup_slope",
        passed=abs(fit.exponent - target) <= tol,
        measured=fit.exponent,
        expected=f"{target} +/- {tol}",
        tolerance=tol,
        columns={"tstar": result.trace.times, f"dr{k}": result.trace.derivative(k)},
        details={"k": k, "fit": fit.to_dict()},
    )


def check_pointwise_decay(result: EvolutionResult, params: dict, tol: float) -> CheckOutcome:
    weight = POINTWISE_WEIGHTS[result.l]
    times = result.trace.times
    positive = times > 0
    product = np.abs(result.trace.derivative(0)[positive]) * times[positive] ** weight
    fit = fit_power_law(HorizonSeries(times[positive], product, "psi_weighted"), _window(result, params))
    return CheckOutcome(
        check="pointwise_decay",
        passed=fit.exponent <= tol,
        measured=fit.exponent,
        expected=f"exponent of |psi| t*^{weight:g} <= {tol}",
        tolerance=tol,
        columns={"tstar": times[positive], "weighted_psi": product},
        details={"weight": weight, "fit": fit.to_dict()},
    )


def _energy_outcome(
    name: str,
    result: EvolutionResult,
    params: dict,
    tol: float,
    multiplier: str,
    region: tuple[float, float],
    commutations: int,
    passes: Callable[[float], bool],
    expected: str,
) -> CheckOutcome:
    energy = energy_timeseries(
        result, multiplier, region=region, commutations=commutations,
        window=_window(result, params),
    )
    columns = {"tstar": energy.series.times, f"E_{multiplier}": energy.series.values}
    if energy.fit is None:
        zero = bool(np.all(energy.series.values == 0))
        return CheckOutcome(
            check=name,
            passed=zero and passes(-math.inf),
            measured=None,
            expected=expected,
            tolerance=tol,
            columns=columns,
            details={"note": "series vanishes in the fit window"},
        )
    return CheckOutcome(
        check=name,
        passed=passes(energy.fit.exponent),
        measured=energy.fit.exponent,
        expected=expected,
        tolerance=tol,
        columns=columns,
        details={"region": list(region), "fit": energy.fit.to_dict()},
    )


def check_energy_decay(result: EvolutionResult, params: dict, tol: float) -> CheckOutcome:
    bg = result.bg
    region = tuple(params.get("region", (bg.r_plus, 2.0 * bg.mass)))
    return _energy_outcome(
        "energy_decay", result, params, tol, "T", region, 0,
        lambda p: p <= tol, f"T-energy exponent <= {tol}",
    )


def check_nondegenerate_obstruction(result: EvolutionResult, params: dict, tol: float) -> CheckOutcome:
    bg = result.bg
    region = (bg.r_plus, 9.0 * bg.mass / 8.0)
    return _energy_outcome(
        "nondegenerate_energy_obstruction", result, params, tol, "N", region, 0,
        lambda p: p > tol, f"N-energy exponent > {tol}",
    )


def check_commuted_n_energy(result: EvolutionResult, params: dict, tol: float) -> CheckOutcome:
    bg = result.bg
    region = (bg.r_plus, 9.0 * bg.mass / 8.0)
    return _energy_outcome(
        "commuted_n_energy", result, params, tol, "N", region, 1,
        lambda p: p >= tol, f"N-energy of d_r psi exponent >= {tol}",
    )


def check_energy_balance(result: EvolutionResult, params: dict, tol: float) -> CheckOutcome:
    balance = energy_balance(result)
    return CheckOutcome(
        check="energy_balance",
        passed=balance.residual <= tol,
        measured=balance.residual,
        expected=f"relative residual <= {tol}",
        tolerance=tol,
        columns={
            "tstar": result.trace.times,
            "horizon_flux": result.trace.horizon_flux_density,
            "outer_flux": result.trace.outer_flux_density,
        },
        details=balance.to_dict(),
    )


def check_higher_order_trapping(result: EvolutionResult, params: dict, tol: float) -> CheckOutcome:
    bg, l = result.bg, result.l
    k = int(params.get("k", 1))
    r0 = float(params.get("r0", 2.0 * bg.mass))
    times = result.snapshot_times
    values = np.array([higher_order_energy(bg, s, r0, k) for s in result.snapshots])
    columns = {"tstar": times, f"E_k{k}": values}
    window = _window(result, params)
    late = (times >= window[0]) & (times <= window[1])

    if l >= 1:
        early_time = float(params.get("early_time", 10.0))
        early = values[int(np.argmin(np.abs(times - early_time)))]
        ratio = float(np.max(values[late]) / early) if early > 0 else math.inf
        return CheckOutcome(
            check="higher_order_trapping",
            passed=ratio <= tol,
            measured=ratio,
            expected=f"late sup / value at t*={early_time:g} <= {tol}",
            tolerance=tol,
            columns=columns,
            details={"k": k, "r0": r0},
        )

    floor = float(params.get("min_exponent", -0.1))
    fit = fit_power_law(HorizonSeries(times, values, f"E_k{k}"), window)
    return CheckOutcome(
        check="higher_order_trapping",
        passed=fit.exponent >= floor,
        measured=fit.exponent,
        expected=f"exponent >= {floor} (no decay for l = 0)",
        tolerance=floor,
        columns=columns,
        details={"k": k, "r0": r0, "fit": fit.to_dict()},
    )


def check_pseudo_h_decay(result: EvolutionResult, params: dict, tol: float) -> CheckOutcome:
    series = _law_series(result)
    fit = fit_power_law(series, _window(result, params))
    return CheckOutcome(
        check="pseudo_h_decay",
        passed=fit.exponent < tol,
        measured=fit.exponent,
        expected=f"exponent < {tol}",
        tolerance=tol,
        columns={"tstar": series.times, f"pseudo_H_{result.l}": series.values},
        details={"fit": fit.to_dict(), "charge_ratio": result.bg.charge_ratio},
    )


def check_hardy(result: EvolutionResult, params: dict, tol: float) -> CheckOutcome:
    which = params.get("which", "first")
    outcomes = [hardy_check(result.bg, s, which) for s in result.snapshots]
    ratios = np.array([o.ratio for o in outcomes])
    worst = float(np.max(ratios)) if ratios.size else 0.0
    return CheckOutcome(
        check="hardy",
        passed=worst <= tol,
        measured=worst,
        expected=f"{which} Hardy ratio <= {tol} on every snapshot",
        tolerance=tol,
        columns={
            "tstar": result.snapshot_times,
            "lhs": np.array([o.lhs for o in outcomes]),
            "rhs": np.array([o.rhs for o in outcomes]),
            "ratio": ratios,
        },
        details={"which": which},
    )


CHECK_RUNNERS: dict[str, Callable[[EvolutionResult, dict, float], CheckOutcome]] = {
    fn.__name__: fn
    for fn in (
        check_h_drift,
        check_non_decay,
        check_blowup_slope,
        check_pointwise_decay,
        check_energy_decay,
        check_energy_balance,
        check_higher_order_trapping,
        check_nondegenerate_obstruction,
        check_commuted_n_energy,
        check_pseudo_h_decay,
        check_hardy,
    )
}


def run_check(name: str, result: EvolutionResult, params: dict | None = None) -> CheckOutcome:
    """
    Run a registered check.

    A "tolerance" entry in params overrides the registry value.

    Raises:
        UsageError: Unknown check name
    """
    if name not in CHECK_REGISTRY:
        raise UsageError(f"Invalid check: {name}. Must be one of: {', '.join(CHECK_REGISTRY)}")
    params = dict(params or {})
    spec = CHECK_REGISTRY[name]
    tol = float(params.pop("tolerance", spec["tolerance"]))
    outcome = CHECK_RUNNERS[spec["runner"]](result, params, tol)
    logger.info(f"{'✅' if outcome.passed else '❌'} {name}: measured={outcome.measured}")
    return outcome
