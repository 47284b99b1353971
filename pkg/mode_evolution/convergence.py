# mode_evolution/convergence.py
"""
Grid-refinement studies.

Each level halves h (and with it dt). Traces of level k are compared at
the times of the base level by taking every 2^k-th record, slices by
taking every 2^k-th node. Observed orders come from successive
differences, p = log2(|q0 - q1| / |q1 - q2|).
"""

from __future__ import annotations

import logging
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from core.errors import UsageError
from geometry import BlackHoleBackground
from .grid import RadialGrid
from .initial_data import InitialDataSpec
from .integrator import EvolutionConfig, EvolutionResult, evolve

logger = logging.getLogger(__name__)


@dataclass
class DiagnosticOrders:
    """Errors between successive levels and the orders they imply."""

    errors: list[float]
    orders: list[float]
    monotone: bool

    @property
    def min_order(self) -> float:
        finite = [p for p in self.orders if math.isfinite(p)]
        return min(finite) if finite else float("nan")


@dataclass
class ConvergenceReport:
    """Observed-order report of a refinement study."""

    n_points: list[int]
    diagnostics: dict[str, DiagnosticOrders] = field(default_factory=dict)
    results: list[EvolutionResult] = field(default_factory=list, repr=False)

    def summary_lines(self) -> list[str]:
        lines = [f"levels (n_points): {self.n_points}"]
        for name, d in self.diagnostics.items():
            errs = ", ".join(f"{e:.3e}" for e in d.errors)
            orders = ", ".join(f"{p:.3f}" for p in d.orders)
            flag = "" if d.monotone else "  [non-monotone]"
            lines.append(f"{name:<14} errors [{errs}]  orders [{orders}]{flag}")
        return lines


def observed_orders(errors: list[float], ratio: float = 2.0) -> list[float]:
    orders = []
    for coarse, fine in zip(errors[:-1], errors[1:]):
        if coarse > 0 and fine > 0:
            orders.append(math.log(coarse / fine) / math.log(ratio))
        else:
            orders.append(float("nan"))
    return orders


def _orders_from_levels(name: str, samples: list[np.ndarray]) -> DiagnosticOrders:
    n = min(len(s) for s in samples)
    trimmed = [s[:n] for s in samples]
    errors = [float(np.max(np.abs(a - b))) for a, b in zip(trimmed[:-1], trimmed[1:])]
    return _package(name, errors)


def _package(name: str, errors: list[float]) -> DiagnosticOrders:
    monotone = all(b < a for a, b in zip(errors[:-1], errors[1:]))
    if not monotone:
        warnings.warn(f"non-monotone refinement errors for {name}: {errors}", stacklevel=3)
        logger.warning(f"⚠️  Non-monotone refinement for {name}: {errors}")
    return DiagnosticOrders(errors=errors, orders=observed_orders(errors), monotone=monotone)


def convergence_study(
    bg: BlackHoleBackground,
    initial: InitialDataSpec,
    config: EvolutionConfig,
    *,
    grid: RadialGrid,
    l: int,
    refinements: int = 2,
    max_workers: int = 4,
) -> ConvergenceReport:
    """
    Run refinements + 1 grids and report observed orders.

    Diagnostics: horizon_psi (psi at r_plus along the trace), final_psi
    (the last slice), h_drift (max |H_l(t) - H_l(0)| per level, which
    converges to zero) and h_series (H_l along the trace).

    Raises:
        UsageError: refinements < 2, or the bump is under-resolved (width < 10 h)
    """
    if refinements < 2:
        raise UsageError(f"refinements must be >= 2, got {refinements}")
    if initial.kind == "gaussian_bump" and initial.width < 10 * grid.h:
        raise UsageError(f"bump width {initial.width} under-resolved at h = {grid.h:.4g}")

    grids = [grid]
    for _ in range(refinements):
        grids.append(grids[-1].refine(2))

    logger.info(f"📐 Convergence study on n_points={[g.n_points for g in grids]}")
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        results = list(pool.map(lambda g: evolve(bg, initial, config, grid=g, l=l), grids))

    report = ConvergenceReport(n_points=[g.n_points for g in grids], results=results)
    stride = [2**k for k in range(len(results))]
    report.diagnostics["horizon_psi"] = _orders_from_levels(
        "horizon_psi", [res.trace.jets[0][::s] for res, s in zip(results, stride)]
    )
    report.diagnostics["final_psi"] = _orders_from_levels(
        "final_psi", [res.final.psi[::s] for res, s in zip(results, stride)]
    )
    if all(res.trace.h_values is not None for res in results):
        report.diagnostics["h_series"] = _orders_from_levels(
            "h_series", [res.trace.h_values[::s] for res, s in zip(results, stride)]
        )
        drifts = [
            float(np.max(np.abs(res.trace.h_values - res.trace.h_values[0])))
            for res in results
        ]
        report.diagnostics["h_drift"] = _package("h_drift", drifts)
    return report
