# mode_evolution/storage.py
"""
CSV and JSON persistence of evolution output.

Layout of a run directory:
    run_meta.json              background, mode, grid, settings
    snapshots/snapshot_NNNNN.csv   '# t*=<value>' then r,psi,pi,phi_r
    horizon_trace.csv          tstar,psi,dr1..drK[,H_l]
    boundary_flux.csv          tstar,horizon_pi,horizon_flux,outer_flux

Floats are written with repr(), which round-trips exactly.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from core.errors import UsageError
from geometry import BlackHoleBackground
from horizon_calculus import derive_conservation_law
from .grid import ModeField, RadialGrid
from .initial_data import InitialDataSpec
from .integrator import EvolutionConfig, EvolutionResult, HorizonTrace

SNAPSHOT_DIR = "snapshots"
TRACE_FILE = "horizon_trace.csv"
FLUX_FILE = "boundary_flux.csv"
META_FILE = "run_meta.json"


def _fmt(x: float) -> str:
    return repr(float(x))


def write_snapshot(fld: ModeField, path: Path) -> Path:
    path = Path(path)
    with open(path, "w", newline="") as fh:
        fh.write(f"# t*={_fmt(fld.time)}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["r", "psi", "pi", "phi_r"])
        for row in zip(fld.r, fld.psi, fld.pi, fld.phi_r):
            writer.writerow([_fmt(v) for v in row])
    return path


def read_snapshot(path: Path, l: int) -> ModeField:
    path = Path(path)
    with open(path) as fh:
        header = fh.readline().strip()
        if not header.startswith("# t*="):
            raise UsageError(f"{path} is not a snapshot file (missing '# t*=' header)")
        time = float(header.split("=", 1)[1])
        data = np.loadtxt(fh, delimiter=",", skiprows=1, ndmin=2)
    return ModeField(l=l, r=data[:, 0], psi=data[:, 1], pi=data[:, 2], phi_r=data[:, 3], time=time)


def trace_columns(trace: HorizonTrace) -> list[str]:
    names = ["tstar", "psi"] + [f"dr{k}" for k in range(1, trace.max_order + 1)]
    if trace.h_values is not None:
        names.append(f"H_{trace.l}")
    return names


def write_trace(trace: HorizonTrace, path: Path) -> Path:
    path = Path(path)
    columns = [trace.times] + list(trace.jets)
    if trace.h_values is not None:
        columns.append(trace.h_values)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(trace_columns(trace))
        for row in zip(*columns):
            writer.writerow([_fmt(v) for v in row])
    return path


def write_boundary_flux(trace: HorizonTrace, path: Path) -> Path:
    path = Path(path)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["tstar", "horizon_pi", "horizon_flux", "outer_flux"])
        for row in zip(trace.times, trace.horizon_pi, trace.horizon_flux_density, trace.outer_flux_density):
            writer.writerow([_fmt(v) for v in row])
    return path


def write_series(path: Path, columns: dict[str, np.ndarray]) -> Path:
    """Generic CSV of equal-length named columns."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(list(columns))
        for row in zip(*columns.values()):
            writer.writerow([_fmt(v) for v in row])
    return path


def write_run(result: EvolutionResult, directory: Path) -> list[Path]:
    """
    Write every artifact of a run.

    Returns:
        Paths of the files written, in a deterministic order
    """
    directory = Path(directory)
    snap_dir = directory / SNAPSHOT_DIR
    snap_dir.mkdir(parents=True, exist_ok=True)

    meta = {
        "background": {"mass": result.bg.mass, "charge": result.bg.charge},
        "l": result.l,
        "grid": {"r_min": result.grid.r_min, "r_max": result.grid.r_max, "n_points": result.grid.n_points},
        "evolution": result.config.model_dump(mode="json"),
        "initial_data": result.initial.model_dump(mode="json") if result.initial else None,
        "dt": result.dt,
        "n_steps": result.n_steps,
    }
    meta_path = directory / META_FILE
    meta_path.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")

    written = [meta_path]
    for i, snap in enumerate(result.snapshots):
        written.append(write_snapshot(snap, snap_dir / f"snapshot_{i:05d}.csv"))
    written.append(write_trace(result.trace, directory / TRACE_FILE))
    written.append(write_boundary_flux(result.trace, directory / FLUX_FILE))
    return written


def load_run(directory: Path) -> EvolutionResult:
    """
    Rebuild an EvolutionResult from a run directory.

    Raises:
        UsageError: Directory or required files missing
    """
    directory = Path(directory)
    meta_path = directory / META_FILE
    if not meta_path.exists():
        raise UsageError(f"{directory} is not a run directory (no {META_FILE})")
    meta = json.loads(meta_path.read_text())

    bg = BlackHoleBackground(**meta["background"])
    l = int(meta["l"])
    grid = RadialGrid(**meta["grid"])
    config = EvolutionConfig(**meta["evolution"])
    initial = InitialDataSpec(**meta["initial_data"]) if meta.get("initial_data") else None

    snapshots = [read_snapshot(p, l) for p in sorted((directory / SNAPSHOT_DIR).glob("snapshot_*.csv"))]

    trace_data = np.genfromtxt(directory / TRACE_FILE, delimiter=",", names=True)
    names = list(trace_data.dtype.names)
    jet_names = ["psi"] + [n for n in names if n.startswith("dr")]
    h_name = f"H_{l}"
    flux = np.genfromtxt(directory / FLUX_FILE, delimiter=",", names=True)
    trace = HorizonTrace(
        times=np.atleast_1d(trace_data["tstar"]),
        jets=np.vstack([np.atleast_1d(trace_data[n]) for n in jet_names]),
        h_values=np.atleast_1d(trace_data[h_name]) if h_name in names else None,
        horizon_pi=np.atleast_1d(flux["horizon_pi"]),
        horizon_flux_density=np.atleast_1d(flux["horizon_flux"]),
        outer_flux_density=np.atleast_1d(flux["outer_flux"]),
        r_horizon=bg.r_plus,
        l=l,
    )
    law = derive_conservation_law(l) if trace.h_values is not None else None
    return EvolutionResult(
        bg=bg, l=l, grid=grid, config=config, snapshots=snapshots, trace=trace,
        dt=float(meta["dt"]), n_steps=int(meta["n_steps"]), law=law, initial=initial,
    )
