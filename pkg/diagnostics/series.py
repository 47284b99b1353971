# diagnostics/series.py
"""
Horizon time series and log-log power-law fits.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field

import numpy as np
import numpy.typing as npt

from core.errors import UsageError

logger = logging.getLogger(__name__)

LATE_WINDOW_FRACTIONS = (0.5, 0.9)


@dataclass(frozen=True, eq=False)
class HorizonSeries:
    """
    One scalar sampled along the horizon (or any t*-indexed quantity).

    Attributes:
        times: Strictly increasing t* values
        values: Samples, same length as times
        label: Name used in output files
    """

    times: np.ndarray
    values: np.ndarray
    label: str = ""
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if times.shape != values.shape or times.ndim != 1:
            raise UsageError(
                f"times and values must be 1-D arrays of equal length, "
                f"got {times.shape} and {values.shape}"
            )
        if times.size > 1 and np.any(np.diff(times) <= 0):
            raise UsageError("times must be strictly increasing")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return self.times.size

    def window(self, t1: float, t2: float) -> HorizonSeries:
        keep = (self.times >= t1) & (self.times <= t2)
        return HorizonSeries(self.times[keep], self.values[keep], self.label, dict(self.meta))

    @property
    def final_value(self) -> float:
        return float(self.values[-1])


@dataclass(frozen=True)
class RateFit:
    """
    Least-squares fit log|y| = exponent * log t + intercept.

    Attributes:
        window: (t1, t2) actually used
        exponent: Slope; decay gives a negative exponent
        intercept: log-amplitude
        residual: RMS of the log-log fit
        n_samples: Points in the fit
        segments: Per-sign-segment fits when the window contains sign
            changes; exponent then comes from the last segment
    """

    window: tuple[float, float]
    exponent: float
    intercept: float
    residual: float
    n_samples: int
    segments: tuple[RateFit, ...] = ()

    @property
    def split(self) -> bool:
        return len(self.segments) > 0

    def predict(self, t: npt.ArrayLike) -> np.ndarray:
        return np.exp(self.intercept) * np.asarray(t, dtype=float) ** self.exponent

    def to_dict(self) -> dict:
        out = {
            "window": list(self.window),
            "exponent": self.exponent,
            "intercept": self.intercept,
            "residual": self.residual,
            "n_samples": self.n_samples,
        }
        if self.segments:
            out["segments"] = [s.to_dict() for s in self.segments]
        return out


def late_window(t_final: float) -> tuple[float, float]:
    """Fit window [0.5, 0.9] * t_final."""
    lo, hi = LATE_WINDOW_FRACTIONS
    return lo * t_final, hi * t_final


def _single_fit(t: np.ndarray, y: np.ndarray) -> RateFit:
    x, z = np.log(t), np.log(np.abs(y))
    slope, intercept = np.polyfit(x, z, 1)
    resid = z - (slope * x + intercept)
    return RateFit(
        window=(float(t[0]), float(t[-1])),
        exponent=float(slope),
        intercept=float(intercept),
        residual=float(np.sqrt(np.mean(resid**2))),
        n_samples=int(t.size),
    )


def fit_power_law(
    series: HorizonSeries,
    window: tuple[float, float] | None = None,
    min_samples: int = 3,
) -> RateFit:
    """
    Fit |value| ~ C t^p over a window.

    Args:
        series: Input series
        window: (t1, t2), default the late window of the series
        min_samples: Minimum number of points per fitted segment

    Returns:
        RateFit; with sign changes in the window, per-segment fits are
        reported in segments and the exponent is that of the last segment

    Raises:
        UsageError: Window outside the series, or too few non-zero samples
    """
    if len(series) == 0:
        raise UsageError("cannot fit an empty series")
    if window is None:
        window = late_window(float(series.times[-1]))
    t1, t2 = window
    if t2 <= t1 or t2 < series.times[0] or t1 > series.times[-1]:
        raise UsageError(
            f"window [{t1}, {t2}] does not overlap the series range "
            f"[{series.times[0]}, {series.times[-1]}]"
        )
    keep = (series.times >= t1) & (series.times <= t2) & (series.times > 0) & (series.values != 0)
    t, y = series.times[keep], series.values[keep]
    if t.size < min_samples:
        raise UsageError(
            f"{series.label or 'series'} has {t.size} non-zero samples in [{t1}, {t2}], "
            f"need {min_samples}"
        )

    signs = np.sign(y)
    cuts = np.flatnonzero(np.diff(signs) != 0) + 1
    if cuts.size == 0:
        return _single_fit(t, y)

    segments = tuple(
        _single_fit(ts, ys)
        for ts, ys in zip(np.split(t, cuts), np.split(y, cuts))
        if ts.size >= min_samples
    )
    if not segments:
        raise UsageError(f"{series.label or 'series'} changes sign too often in [{t1}, {t2}]")
    warnings.warn(
        f"{series.label or 'series'} changes sign {cuts.size} time(s) in [{t1:.4g}, {t2:.4g}]; "
        f"reporting per-segment fits",
        RuntimeWarning,
    )
    last = segments[-1]
    return RateFit(
        window=(float(t[0]), float(t[-1])),
        exponent=last.exponent,
        intercept=last.intercept,
        residual=last.residual,
        n_samples=int(t.size),
        segments=segments,
    )
