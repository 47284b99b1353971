# conftest.py
"""
Shared fixtures: backgrounds and one small evolved run per session.
"""

import pytest

from geometry import BlackHoleBackground
from mode_evolution import EvolutionConfig, InitialDataSpec, RadialGrid, evolve

# Small extreme l = 0 run: h = 0.025, t* in [0, 20]
SMALL_R_MAX = 15.0
SMALL_N_POINTS = 561
SMALL_T_FINAL = 20.0


@pytest.fixture(scope="session")
def extreme():
    return BlackHoleBackground(mass=1.0, charge=1.0)


@pytest.fixture(scope="session")
def subextreme():
    return BlackHoleBackground.from_ratio(1.0, 0.8)


@pytest.fixture(scope="session")
def bump():
    return InitialDataSpec(kind="gaussian_bump", center=2.0, width=0.6, amplitude=1.0)


@pytest.fixture(scope="session")
def small_config():
    return EvolutionConfig(cfl=0.5, t_final=SMALL_T_FINAL, output_every=2.0)


@pytest.fixture(scope="session")
def small_grid(extreme):
    return RadialGrid.for_background(extreme, SMALL_R_MAX, SMALL_N_POINTS)


@pytest.fixture(scope="session")
def small_run(extreme, bump, small_config, small_grid):
    """Extreme l = 0 evolution shared by the diagnostics tests."""
    return evolve(extreme, bump, small_config, grid=small_grid, l=0)


@pytest.fixture
def run_config_dict(tmp_path):
    """A fast pipeline config as a plain dict."""
    return {
        "background": {"mass": 1.0, "charge_ratio": 1.0},
        "l": 0,
        "grid": {"r_max": 12.0, "n_points": 221},
        "initial_data": {"kind": "gaussian_bump", "center": 2.0, "width": 0.6},
        "evolution": {"t_final": 10.0, "output_every": 2.0},
        "diagnostics": [],
        "output_dir": str(tmp_path / "run"),
    }
