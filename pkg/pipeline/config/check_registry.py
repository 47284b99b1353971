"""
Analyze checks and their acceptance thresholds.

Declarative table consumed by the analyze node and the CLI; the runner
functions live in pipeline.utils.checks under the name given here.
"""

from typing import Literal, TypedDict

CheckName = Literal[
    "h_drift",
    "non_decay",
    "blowup_slope",
    "pointwise_decay",
    "energy_decay",
    "energy_balance",
    "higher_order_trapping",
    "nondegenerate_energy_obstruction",
    "commuted_n_energy",
    "pseudo_h_decay",
    "hardy",
]


class CheckSpec(TypedDict):
    """Definition of a single analyze check."""
    runner: str
    modes: list[int] | None  # allowed l, None for any
    extreme_only: bool
    subextreme_only: bool
    expected: str
    tolerance: float
    description: str


CHECK_REGISTRY: dict[str, CheckSpec] = {
    "h_drift": {
        "runner": "check_h_drift",
        "modes": None,
        "extreme_only": True,
        "subextreme_only": False,
        "expected": "relative drift of H_l along the horizon <= tolerance",
        "tolerance": 0.01,
        "description": "Conservation of H_l on the horizon",
    },
    "non_decay": {
        "runner": "check_non_decay",
        "modes": None,
        "extreme_only": True,
        "subextreme_only": False,
        "expected": "d_r^{l+1} psi within tolerance of H_l late; lower orders decay",
        "tolerance": 0.02,
        "description": "Non-decay of the first transversal derivative beyond l",
    },
    "blowup_slope": {
        "runner": "check_blowup_slope",
        "modes": None,
        "extreme_only": True,
        "subextreme_only": False,
        "expected": "late slope of |d_r^k psi| equals k - l - 1",
        "tolerance": 0.15,
        "description": "Blow-up rate of higher transversal derivatives",
    },
    "pointwise_decay": {
        "runner": "check_pointwise_decay",
        "modes": [0, 1, 2],
        "extreme_only": True,
        "subextreme_only": False,
        "expected": "exponent of |psi(t*, M)| t*^a <= tolerance (a = 3/5, 3/4, 1)",
        "tolerance": 0.05,
        "description": "Pointwise decay bound on the horizon",
    },
    "energy_decay": {
        "runner": "check_energy_decay",
        "modes": None,
        "extreme_only": False,
        "subextreme_only": False,
        "expected": "T-flux exponent on [r_plus, 2M] <= -1.5",
        "tolerance": -1.5,
        "description": "Decay of the degenerate energy near the horizon",
    },
    "energy_balance": {
        "runner": "check_energy_balance",
        "modes": None,
        "extreme_only": False,
        "subextreme_only": False,
        "expected": "relative T-energy balance residual <= tolerance",
        "tolerance": 0.005,
        "description": "Discrete T-energy conservation",
    },
    "higher_order_trapping": {
        "runner": "check_higher_order_trapping",
        "modes": None,
        "extreme_only": True,
        "subextreme_only": False,
        "expected": "l >= 1: late sup <= 2 x early value; l = 0: exponent >= -0.1",
        "tolerance": 2.0,
        "description": "Bounded (l >= 1) or non-decaying (l = 0) commuted energy on [M, 2M]",
    },
    "nondegenerate_energy_obstruction": {
        "runner": "check_nondegenerate_obstruction",
        "modes": [0],
        "extreme_only": True,
        "subextreme_only": False,
        "expected": "N-energy exponent on [M, 9M/8] > -0.5",
        "tolerance": -0.5,
        "description": "No decay of the non-degenerate energy for l = 0",
    },
    "commuted_n_energy": {
        "runner": "check_commuted_n_energy",
        "modes": [0],
        "extreme_only": True,
        "subextreme_only": False,
        "expected": "N-energy of d_r psi on [M, 9M/8] has exponent >= -0.1",
        "tolerance": -0.1,
        "description": "Growth or saturation of the commuted N-energy for l = 0",
    },
    "pseudo_h_decay": {
        "runner": "check_pseudo_h_decay",
        "modes": None,
        "extreme_only": False,
        "subextreme_only": True,
        "expected": "pseudo-H_l on r = r_plus fits a negative exponent",
        "tolerance": 0.0,
        "description": "No horizon conservation law off extremality",
    },
    "hardy": {
        "runner": "check_hardy",
        "modes": None,
        "extreme_only": False,
        "subextreme_only": False,
        "expected": "first Hardy ratio <= 1 on every snapshot",
        "tolerance": 1.0,
        "description": "First Hardy inequality on evolved slices",
    },
}
