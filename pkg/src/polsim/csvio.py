"""CSV and gnuplot-script emission with a fixed, regression-friendly format.

Floats are written with 17 significant digits, "." decimal separator and no
locale dependence, so output files are bit-stable across runs and usable as
golden files.
"""

from __future__ import annotations

import cmath
import math
from pathlib import Path


def format_value(x) -> str:
    if isinstance(x, str):
        return x
    if isinstance(x, complex):
        raise TypeError("write complex data as separate re/im or abs/arg columns")
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, int):
        return str(x)
    xf = float(x)
    if math.isnan(xf):
        return "nan"
    return f"{xf:.17g}"


def write_csv(path, header, rows) -> Path:
    """Write header and rows; returns the path. Rows may be any iterable of
    sequences matching the header length."""
    path = Path(path)
    header = list(header)
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            row = list(row)
            if len(row) != len(header):
                raise ValueError(f"row of length {len(row)} does not match "
                                 f"{len(header)} header columns")
            fh.write(",".join(format_value(v) for v in row) + "\n")
    return path


def complex_columns(name: str):
    """Column-name pair for one complex quantity stored as re/im."""
    return f"re_{name}", f"im_{name}"


def polar_columns(name: str):
    """Column-name pair for one complex quantity stored as abs/arg."""
    return f"abs_{name}", f"arg_{name}"


def split_complex(z):
    return z.real, z.imag


def split_polar(z):
    return abs(z), cmath.phase(z)


def write_gnuplot(path, csv_name: str, title: str, plots) -> Path:
    """Emit a minimal gnuplot script plotting columns of a CSV file.

    plots is a list of (column_index_1based, label) pairs.
    """
    path = Path(path)
    lines = [
        "set datafile separator ','",
        f"set title '{title}'",
        "set key autotitle columnhead",
        "set xlabel 'tau'",
        "plot " + ", \\\n     ".join(
            f"'{csv_name}' using 1:{col} with lines title '{label}'"
            for col, label in plots
        ),
        "pause -1",
    ]
    path.write_text("\n".join(lines) + "\n")
    return path
