"""Deterministic serialization of reports, grids and degree tables.

JSON output is byte-stable for a fixed input: dictionary keys keep their
(deterministic) construction order and floats print with 17 significant
digits, enough to round-trip float64.  CSV exists only for tabular data
(grids and degree sequences).
"""

from __future__ import annotations

import math

import numpy as np

from .errors import UnsupportedFormat
from .lattice import Grid

__all__ = ["dumps_json", "grid_to_csv", "degrees_to_csv", "grid_to_jsonable",
           "emit_report"]


def _format_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"non-finite value {x} in report")
    s = format(x, ".17g")
    # keep a numeric token that parses back as float
    return s


def _encode(obj, out: list):
    if obj is None:
        out.append("null")
    elif obj is True:
        out.append("true")
    elif obj is False:
        out.append("false")
    elif isinstance(obj, (int, np.integer)) and not isinstance(obj, bool):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(_format_float(float(obj)))
    elif isinstance(obj, str):
        out.append('"' + obj.replace("\\", "\\\\").replace('"', '\\"') + '"')
    elif isinstance(obj, dict):
        out.append("{")
        for i, (k, v) in enumerate(obj.items()):
            if i:
                out.append(",")
            _encode(str(k), out)
            out.append(":")
            _encode(v, out)
        out.append("}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        out.append("[")
        for i, v in enumerate(obj):
            if i:
                out.append(",")
            _encode(v, out)
        out.append("]")
    else:
        raise UnsupportedFormat(f"cannot serialize {type(obj).__name__}")


def dumps_json(obj) -> bytes:
    out: list = []
    _encode(obj, out)
    out.append("\n")
    return "".join(out).encode("utf-8")


def grid_to_csv(grid: Grid) -> bytes:
    lines = ["n,m,value"]
    vals = grid.values
    for n in range(vals.shape[0]):
        for m in range(vals.shape[1]):
            lines.append(f"{n},{m},{_format_float(float(vals[n, m]))}")
    return ("\n".join(lines) + "\n").encode("utf-8")


def grid_to_jsonable(grid: Grid) -> dict:
    return {
        "rows": int(grid.shape[0]),
        "cols": int(grid.shape[1]),
        "values": [[float(x) for x in row] for row in grid.values],
    }


def degrees_to_csv(degrees) -> bytes:
    lines = ["k,degree"]
    for k, d in enumerate(degrees, start=1):
        lines.append(f"{k},{int(d)}")
    return ("\n".join(lines) + "\n").encode("utf-8")


def emit_report(result, fmt: str = "json") -> bytes:
    """Serialize a report-like object.

    ``json`` accepts anything dict-like (objects exposing to_dict are
    converted); ``csv`` accepts grids and degree sequences only.
    """
    if fmt == "json":
        if hasattr(result, "to_dict"):
            result = result.to_dict()
        elif isinstance(result, Grid):
            result = grid_to_jsonable(result)
        return dumps_json(result)
    if fmt == "csv":
        if isinstance(result, Grid):
            return grid_to_csv(result)
        if hasattr(result, "degrees"):
            return degrees_to_csv(result.degrees)
        if isinstance(result, (list, tuple)) and all(
                isinstance(x, (int, np.integer)) for x in result):
            return degrees_to_csv(result)
        raise UnsupportedFormat("csv output exists only for grids and degree tables")
    raise UnsupportedFormat(f"unknown format {fmt!r}")
