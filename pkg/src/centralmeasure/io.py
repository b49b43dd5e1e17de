"""Plain-text serialization: matrix text format and CSV reports.

Floats are written with 17 significant digits (``repr``-exact round trip,
independent of locale).
"""
from __future__ import annotations

import csv
import io as _io
from pathlib import Path

import numpy as np

from .measures import AtomicMeasure

__all__ = [
    "fmt",
    "format_matrix",
    "parse_matrix",
    "write_matrix",
    "read_matrix",
    "write_csv",
    "write_measure_csv",
    "read_measure_csv",
    "CONVERGE_COLUMNS",
    "NORM_COLUMNS",
    "MOMENT_COLUMNS",
    "PLOT_COLUMNS",
]

CONVERGE_COLUMNS = (
    "replica", "n", "interval_lo", "interval_hi", "a", "b", "lambda_n", "lambda_inf",
    "sigma_re", "sigma_im", "sigma_inf_re", "sigma_inf_im", "abs_err_lambda", "abs_err_sigma",
)
NORM_COLUMNS = ("replica", "n", "norm_over_n", "bound", "pass")
MOMENT_COLUMNS = ("n", "r", "empirical", "oracle", "z")
PLOT_COLUMNS = ("series", "replica", "interval_lo", "interval_hi", "a", "b", "n", "error")


def fmt(v) -> str:
    """Locale-independent text for a CSV cell."""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def format_matrix(m, tag: str | None = None) -> str:
    """Header ``n <dim> [tag]`` then one row per line of ``re:im`` pairs."""
    a = np.asarray(m, dtype=complex)
    lines = [f"n {a.shape[0]}" + (f" {tag}" if tag else "")]
    for row in a:
        lines.append(" ".join(f"{fmt(z.real)}:{fmt(z.imag)}" for z in row))
    return "\n".join(lines) + "\n"


def parse_matrix(text: str) -> tuple[np.ndarray, str | None]:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    head = lines[0].split()
    if len(head) < 2 or head[0] != "n":
        raise ValueError(f"bad matrix header {lines[0]!r}")
    n = int(head[1])
    tag = head[2] if len(head) > 2 else None
    a = np.empty((n, n), dtype=complex)
    if len(lines) - 1 != n:
        raise ValueError(f"expected {n} rows, found {len(lines) - 1}")
    for j, ln in enumerate(lines[1:]):
        cells = ln.split()
        if len(cells) != n:
            raise ValueError(f"row {j + 1} has {len(cells)} entries, expected {n}")
        for k, c in enumerate(cells):
            re, im = c.split(":")
            a[j, k] = complex(float(re), float(im))
    return a, tag


def write_matrix(path, m, tag: str | None = None) -> Path:
    path = Path(path)
    path.write_text(format_matrix(m, tag), encoding="ascii")
    return path


def read_matrix(path) -> tuple[np.ndarray, str | None]:
    return parse_matrix(Path(path).read_text(encoding="ascii"))


def write_csv(path, columns, rows) -> Path:
    """Write dict rows under ``columns``; ``\\n`` line endings."""
    path = Path(path)
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([fmt(row[c]) for c in columns])
    path.write_text(buf.getvalue(), encoding="ascii")
    return path


def write_measure_csv(path, m: AtomicMeasure) -> Path:
    rows = ({"location": x, "weight_re": w.real, "weight_im": w.imag}
            for x, w in zip(m.locations, m.weights))
    return write_csv(path, ("location", "weight_re", "weight_im"), rows)


def read_measure_csv(path, kind: str = "projection") -> AtomicMeasure:
    with open(path, newline="", encoding="ascii") as fh:
        rows = list(csv.DictReader(fh))
    loc = [float(r["location"]) for r in rows]
    w = [complex(float(r["weight_re"]), float(r["weight_im"])) for r in rows]
    return AtomicMeasure(np.array(loc), np.array(w, dtype=complex), kind)
