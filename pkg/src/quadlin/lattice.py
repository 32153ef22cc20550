"""Rectangular lattice evolution for explicit quad equations.

A grid holds values u[n, m] with n the horizontal index (first shift
direction) and m the vertical one (second shift direction).  Row m=0 and
column n=0 carry the staircase initial data; every other cell is computed
exactly once from its three lower-left neighbours:

    u[n+1, m+1] = F(u[n, m], u[n+1, m], u[n, m+1])

Evolution proceeds by anti-diagonals, which matches the dependency cone;
the result is identical to any other admissible order because each cell
is written once with no reductions.
"""

from __future__ import annotations

import numpy as np

from .errors import ConflictError, DimensionError, DomainError
from .expr import Expression, evaluate

__all__ = ["Grid", "make_staircase", "evolve_quad", "residual"]


class Grid:
    """Immutable (N+1)x(M+1) array of float64 lattice values."""

    __slots__ = ("values",)

    def __init__(self, values: np.ndarray):
        arr = np.asarray(values, dtype=np.float64)
        if arr.ndim != 2:
            raise DimensionError("grid values must be a 2-d array")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    def __setattr__(self, *a):  # pragma: no cover - guard only
        raise AttributeError("Grid is immutable")

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    def __getitem__(self, idx):
        return self.values[idx]

    def provenance(self, n: int, m: int) -> str:
        return "initial" if n == 0 or m == 0 else "computed"

    @property
    def filled(self) -> bool:
        return not np.isnan(self.values).any()

    def __repr__(self):
        r, c = self.shape
        return f"Grid({r}x{c}, filled={self.filled})"


def make_staircase(n: int, m: int, *, row=None, col=None, seed=None,
                   interval=(0.2, 1.7), log_uniform: bool = False) -> Grid:
    """Build a grid with only the initial row m=0 and column n=0 filled.

    Either pass explicit ``row`` (length n+1) and ``col`` (length m+1)
    sharing their first entry, or a ``seed`` to draw them uniformly from
    ``interval`` (log-uniformly when ``log_uniform``).  Interior cells are
    NaN until :func:`evolve_quad` fills them.
    """
    if n < 1 or m < 1:
        raise DimensionError(f"staircase needs n, m >= 1, got {n}x{m}")
    values = np.full((n + 1, m + 1), np.nan)
    if row is not None or col is not None:
        if row is None or col is None:
            raise ConflictError("explicit staircase needs both row and col")
        row = np.asarray(row, dtype=np.float64)
        col = np.asarray(col, dtype=np.float64)
        if row.shape != (n + 1,) or col.shape != (m + 1,):
            raise DimensionError(
                f"row needs length {n + 1} and col length {m + 1}, "
                f"got {row.shape[0]} and {col.shape[0]}")
        if row[0] != col[0]:
            raise ConflictError(f"corner mismatch {row[0]} != {col[0]}")
    else:
        rng = np.random.default_rng(seed)
        lo, hi = interval
        if log_uniform:
            draw = np.exp(rng.uniform(np.log(lo), np.log(hi), n + m + 1))
        else:
            draw = rng.uniform(lo, hi, n + m + 1)
        row = draw[: n + 1]
        col = np.concatenate(([draw[0]], draw[n + 1:]))
    values[:, 0] = row
    values[0, :] = col
    return Grid(values)


def evolve_quad(eq, init: Grid) -> Grid:
    """Fill the grid from staircase data using eq.rhs as the update map.

    ``eq`` is any object with an ``rhs`` Expression over u00/u10/u01.  A
    singular F (exact zero denominator, log/power violation, overflow)
    aborts with the offending cell index attached.  The equation's
    sampling guard is deliberately not applied here: evolutions may pass
    through scale-tiny but perfectly conditioned values.
    """
    values = np.array(init.values)
    rows, cols = values.shape
    if np.isnan(values[:, 0]).any() or np.isnan(values[0, :]).any():
        raise DimensionError("initial staircase is incomplete")
    rhs: Expression = eq.rhs
    env = {"u00": 0.0, "u10": 0.0, "u01": 0.0}
    for s in range(2, rows + cols - 1):
        n_lo = max(1, s - cols + 1)
        n_hi = min(rows - 1, s - 1)
        for n in range(n_lo, n_hi + 1):
            m = s - n
            env["u00"] = values[n - 1, m - 1]
            env["u10"] = values[n, m - 1]
            env["u01"] = values[n - 1, m]
            try:
                values[n, m] = evaluate(rhs, env)
            except DomainError as err:
                raise DomainError(err.node, err.point, cell=(n, m)) from None
    return Grid(values)


def residual(relation: Expression, grid: Grid, *, guard: float = 0.0) -> float:
    """Max absolute value of a four-point relation over all plaquettes.

    The relation may reference u11; the grid must be fully evolved.
    """
    if not grid.filled:
        raise DimensionError("grid has unfilled cells")
    values = grid.values
    rows, cols = values.shape
    worst = 0.0
    env = {}
    for n in range(rows - 1):
        for m in range(cols - 1):
            env["u00"] = values[n, m]
            env["u10"] = values[n + 1, m]
            env["u01"] = values[n, m + 1]
            env["u11"] = values[n + 1, m + 1]
            try:
                r = abs(evaluate(relation, env, div_guard=guard))
            except DomainError as err:
                raise DomainError(err.node, err.point, cell=(n, m)) from None
            if r > worst:
                worst = r
    return worst
