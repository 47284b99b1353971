"""
Reissner-Nordstrom background geometry.

Metric functions, tortoise coordinate, chart conversions and the
induced geometry of the t* foliation.
"""

from .background import (
    BlackHoleBackground,
    HorizonTag,
    metric_potential,
    metric_jet,
    radial_coefficient,
    radial_jet,
    trapping_polynomial,
    photon_sphere,
    surface_gravity,
)
from .tortoise import tortoise, tortoise_inverse
from .charts import (
    ChartTag,
    CHART_TAGS,
    ChartPoint,
    chart_convert,
    wave_operator_coefficients,
)
from .foliation import SliceGeometry

__all__ = [
    "BlackHoleBackground",
    "HorizonTag",
    "metric_potential",
    "metric_jet",
    "radial_coefficient",
    "radial_jet",
    "trapping_polynomial",
    "photon_sphere",
    "surface_gravity",
    "tortoise",
    "tortoise_inverse",
    "ChartTag",
    "CHART_TAGS",
    "ChartPoint",
    "chart_convert",
    "wave_operator_coefficients",
    "SliceGeometry",
]
