"""
Gnuplot-ready output.

Writes whitespace-separated .dat files and a matching .plt script; no
plotting library is involved.
"""

from pathlib import Path

import numpy as np


def _fmt(x: float) -> str:
    return repr(float(x))


def write_gnuplot(
    directory: Path,
    stem: str,
    columns: dict[str, np.ndarray],
    title: str = "",
    logscale: bool = False,
) -> list[Path]:
    """
    Write <stem>.dat and <stem>.plt.

    The first column is the abscissa; every further column becomes one
    curve. With logscale the script plots absolute values on log-log axes.

    Returns:
        The two paths written
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    names = list(columns)
    dat = directory / f"{stem}.dat"
    with open(dat, "w") as fh:
        fh.write("# " + " ".join(names) + "\n")
        for row in zip(*columns.values()):
            fh.write(" ".join(_fmt(v) for v in row) + "\n")

    lines = [
        f"set title '{title or stem}'",
        f"set xlabel '{names[0]}'",
        "set key left",
    ]
    if logscale:
        lines.append("set logscale xy")
    curves = []
    for i, name in enumerate(names[1:], start=2):
        expr = f"(abs(${i}))" if logscale else str(i)
        curves.append(f"'{dat.name}' using 1:{expr} with lines title '{name}'")
    lines.append("plot " + ", \\\n     ".join(curves))
    plt = directory / f"{stem}.plt"
    plt.write_text("\n".join(lines) + "\n")
    return [dat, plt]
