"""Discrete Burgers family, its Cole-Hopf linearization, and relatives.

Grid convention: first index n is horizontal, second index m vertical.
The linear field evolves by

    psi[n+1, m+1] = psi[n, m] - p * psi[n+1, m]

and the Cole-Hopf map takes vertical ratios, u[n, m] = psi[n, m+1] / psi[n, m].
The mapped field satisfies the classical Burgers relation

    u10 * (p + u11) - u00 * (p + u10) = 0                       (three corners)

identically.  The generalized family is

    (k0 - u10) * (k2*u01 + k1) * u00 - (k0 - u11) * (k2*u00 + k1) * u10 = 0

with gauge k1 in {0, 1}; the classical relation is its (k0, k1, k2) =
(-p, 1, 0) member (the sign of k0 is fixed here by requiring Cole-Hopf
data to satisfy both forms with one convention).  The same relation is
equivalently the path-independence condition of the multiplicative
potential v with v[n+1,m]/v[n,m] = (k2*u00 + k1)/(k0 - u10) and
v[n,m+1]/v[n,m] = u00.

A Moebius change of variable links the family to the Hietarinta equation

    (u00+e2)/(u00+e1) * (u11+o2)/(u11+o1) = (u10+e2)/(u10+o1) * (u01+o2)/(u01+e1)

via u = k0 * (o1-o2)/(o1-e2) * (ut+e2)/(ut+o2) with the cross-ratio
constraint k2*k0 = -(o1-e2)(e1-o2)/((e1-e2)(o1-o2)).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (DegenerateParams, DimensionError, PoleError,
                     ZeroDivisionCell)
from .lattice import Grid

__all__ = [
    "BurgersFamily",
    "HietarintaParams",
    "evolve_linear_burgers",
    "cole_hopf_map",
    "verify_burgers",
    "verify_canonical_form",
    "verify_potential_compatibility",
    "hietarinta_transform",
    "inverse_hietarinta_transform",
    "rosa_residual",
    "solve_g23",
    "solve_rosa",
    "solve_canonical",
]

_PSI_GUARD = 1e-12
_POLE_GUARD = 1e-9


@dataclass(frozen=True)
class BurgersFamily:
    """Coefficients (kappa0, kappa1, kappa2) of the generalized relation;
    ``p`` is set for instances built from the classical parameter."""

    kappa0: float
    kappa1: float
    kappa2: float
    p: float | None = None

    def __post_init__(self):
        if self.kappa0 == 0.0 and self.kappa1 == 0.0 and self.kappa2 == 0.0:
            raise DegenerateParams("kappa coefficients must not all vanish")
        if self.kappa1 not in (0.0, 1.0):
            raise DegenerateParams("kappa1 is gauge-fixed to 0 or 1")

    @classmethod
    def classical(cls, p: float) -> "BurgersFamily":
        return cls(kappa0=-float(p), kappa1=1.0, kappa2=0.0, p=float(p))

    def kappas(self) -> tuple[float, float, float]:
        return (self.kappa0, self.kappa1, self.kappa2)


@dataclass(frozen=True)
class HietarintaParams:
    """Shift parameters of the Hietarinta equation."""

    e1: float
    e2: float
    o1: float
    o2: float

    def __post_init__(self):
        if self.e1 == self.e2 or self.o1 == self.o2:
            raise DegenerateParams("need e1 != e2 and o1 != o2")

    @property
    def cross_ratio(self) -> float:
        return ((self.o1 - self.e2) * (self.e1 - self.o2)
                / ((self.e1 - self.e2) * (self.o1 - self.o2)))

    def poles(self) -> tuple[float, float, float, float]:
        return (-self.e1, -self.e2, -self.o1, -self.o2)


def evolve_linear_burgers(p: float, init: Grid) -> Grid:
    """Fill a grid by psi[n+1, m+1] = psi[n, m] - p * psi[n+1, m]."""
    values = np.array(init.values)
    rows, cols = values.shape
    if np.isnan(values[:, 0]).any() or np.isnan(values[0, :]).any():
        raise DimensionError("initial staircase is incomplete")
    for n in range(1, rows):
        for m in range(1, cols):
            values[n, m] = values[n - 1, m - 1] - p * values[n, m - 1]
    return Grid(values)


def cole_hopf_map(psi: Grid) -> Grid:
    """u[n, m] = psi[n, m+1] / psi[n, m]; one column shorter than psi."""
    vals = psi.values
    rows, cols = vals.shape
    if cols < 2:
        raise DimensionError("need at least two columns of psi")
    small = np.abs(vals[:, :-1]) <= _PSI_GUARD
    if small.any():
        n, m = np.argwhere(small)[0]
        raise ZeroDivisionCell((int(n), int(m)), "psi")
    return Grid(vals[:, 1:] / vals[:, :-1])


def _normalized_max(t1: np.ndarray, t2: np.ndarray) -> float:
    """Max plaquette residual normalized by the local value scale."""
    scale = 1.0 + np.abs(t1) + np.abs(t2)
    return float((np.abs(t1 - t2) / scale).max())


def verify_burgers(u: Grid, family: BurgersFamily) -> float:
    """Residual of the generalized relation over all plaquettes of u.

    For a classical instance this equals the textbook three-corner
    residual term for term.
    """
    k0, k1, k2 = family.kappas()
    v = u.values
    u00 = v[:-1, :-1]
    u10 = v[1:, :-1]
    u01 = v[:-1, 1:]
    u11 = v[1:, 1:]
    t1 = (k0 - u10) * (k2 * u01 + k1) * u00
    t2 = (k0 - u11) * (k2 * u00 + k1) * u10
    return _normalized_max(t1, t2)


def verify_canonical_form(u: Grid) -> float:
    """Residual of (1 + u00) * u10 = (1 + u01) * u00 (three sites only)."""
    v = u.values
    u00 = v[:-1, :-1]
    u10 = v[1:, :-1]
    u01 = v[:-1, 1:]
    return _normalized_max((1.0 + u00) * u10, (1.0 + u01) * u00)


def verify_potential_compatibility(u: Grid, family: BurgersFamily,
                                   v0: float = 1.0) -> float:
    """Max relative mismatch of the multiplicative potential around plaquettes.

    From each plaquette corner, v is propagated along the two orders
    (right-up versus up-right) starting at v0; the relation holds exactly
    iff u solves the generalized Burgers relation.
    """
    if v0 == 0.0:
        raise ZeroDivisionCell((0, 0), "v0")
    k0, k1, k2 = family.kappas()
    v = u.values
    u00 = v[:-1, :-1]
    u10 = v[1:, :-1]
    u01 = v[:-1, 1:]
    u11 = v[1:, 1:]
    den_a = k0 - u10
    den_b = k0 - u11
    for den in (den_a, den_b):
        bad = np.abs(den) <= _PSI_GUARD
        if bad.any():
            n, m = np.argwhere(bad)[0]
            raise ZeroDivisionCell((int(n), int(m)), "kappa0 - u10")
    # right-up: v0 * E1(n,m) * E2(n+1,m); up-right: v0 * E2(n,m) * E1(n,m+1).
    # grouped so both paths perform the same multiplications (constant
    # fields then agree bit-exactly)
    path1 = v0 * (((k2 * u00 + k1) / den_a) * u10)
    path2 = v0 * (u00 * ((k2 * u01 + k1) / den_b))
    scale = np.maximum(np.abs(path1), np.abs(path2)) + 1e-300
    return float((np.abs(path1 - path2) / scale).max())


# ---------------------------------------------------------------------------
# Hietarinta equation
# ---------------------------------------------------------------------------

def _mobius_scale(params: HietarintaParams, kappa0: float) -> float:
    return kappa0 * (params.o1 - params.o2) / (params.o1 - params.e2)


def hietarinta_transform(params: HietarintaParams, u_tilde: Grid,
                         kappa0: float = 1.0) -> tuple[Grid, BurgersFamily]:
    """Map a Hietarinta field to the generalized Burgers family.

    Applies u = J * (ut + e2)/(ut + o2) pointwise with J chosen so the
    image solves the family with kappa1 = 1 and kappa2 = -cross_ratio/kappa0.
    """
    if kappa0 == 0.0:
        raise DegenerateParams("kappa0 gauge must be nonzero")
    vals = u_tilde.values
    near_pole = np.abs(vals + params.o2) <= _POLE_GUARD
    if near_pole.any():
        n, m = np.argwhere(near_pole)[0]
        raise PoleError((int(n), int(m)), float(vals[n, m]))
    J = _mobius_scale(params, kappa0)
    mapped = J * (vals + params.e2) / (vals + params.o2)
    family = BurgersFamily(kappa0=float(kappa0), kappa1=1.0,
                           kappa2=-params.cross_ratio / kappa0)
    return Grid(mapped), family


def inverse_hietarinta_transform(params: HietarintaParams, u: Grid,
                                 kappa0: float = 1.0) -> Grid:
    """Inverse Moebius map: recover the Hietarinta field from a family field."""
    J = _mobius_scale(params, kappa0)
    vals = u.values
    near_pole = np.abs(vals - J) <= _POLE_GUARD * abs(J)
    if near_pole.any():
        n, m = np.argwhere(near_pole)[0]
        raise PoleError((int(n), int(m)), float(vals[n, m]))
    return Grid((J * params.e2 - vals * params.o2) / (vals - J))


def rosa_residual(u: Grid, params: HietarintaParams) -> float:
    """Residual of the Hietarinta equation over all plaquettes, normalized."""
    e1, e2, o1, o2 = params.e1, params.e2, params.o1, params.o2
    v = u.values
    u00 = v[:-1, :-1]
    u10 = v[1:, :-1]
    u01 = v[:-1, 1:]
    u11 = v[1:, 1:]
    for shift, field in ((e1, u00), (o1, u11), (o1, u10), (e1, u01)):
        bad = np.abs(field + shift) <= _POLE_GUARD
        if bad.any():
            n, m = np.argwhere(bad)[0]
            raise PoleError((int(n), int(m)), float(field[n, m]))
    # products first: constant fields then cancel bit-exactly
    lhs = ((u00 + e2) * (u11 + o2)) / ((u00 + e1) * (u11 + o1))
    rhs = ((u10 + e2) * (u01 + o2)) / ((u10 + o1) * (u01 + e1))
    return _normalized_max(lhs, rhs)


# ---------------------------------------------------------------------------
# Cell-by-cell solvers (produce exact solution grids for verification)
# ---------------------------------------------------------------------------

def solve_g23(family: BurgersFamily, init: Grid) -> Grid:
    """Fill a staircase grid by solving the generalized relation for u11."""
    k0, k1, k2 = family.kappas()
    values = np.array(init.values)
    rows, cols = values.shape
    for n in range(1, rows):
        for m in range(1, cols):
            u00 = values[n - 1, m - 1]
            u10 = values[n, m - 1]
            u01 = values[n - 1, m]
            den = (k2 * u00 + k1) * u10
            if abs(den) <= _PSI_GUARD:
                raise ZeroDivisionCell((n, m), "(k2*u00 + k1) * u10")
            values[n, m] = k0 - (k0 - u10) * (k2 * u01 + k1) * u00 / den
    return Grid(values)


def solve_rosa(params: HietarintaParams, init: Grid) -> Grid:
    """Fill a staircase grid by solving the Hietarinta equation for u11."""
    e1, e2, o1, o2 = params.e1, params.e2, params.o1, params.o2
    values = np.array(init.values)
    rows, cols = values.shape
    for n in range(1, rows):
        for m in range(1, cols):
            u00 = values[n - 1, m - 1]
            u10 = values[n, m - 1]
            u01 = values[n - 1, m]
            den = (u10 + o1) * (u01 + e1) * (u00 + e2)
            if abs(den) <= _POLE_GUARD:
                raise PoleError((n, m), float(den))
            ratio = (u10 + e2) * (u01 + o2) * (u00 + e1) / den
            if abs(1.0 - ratio) <= _POLE_GUARD:
                raise PoleError((n, m), float(ratio))
            values[n, m] = (ratio * o1 - o2) / (1.0 - ratio)
    return Grid(values)


def solve_canonical(init_col, n: int, m: int) -> Grid:
    """Solve (1 + u00) * u10 = (1 + u01) * u00 forward in n.

    ``init_col`` supplies u[0, :] over n + m + 1 vertical positions; each
    new column is one shorter, leaving an (n+1) x (m+1) rectangle.
    """
    col = np.asarray(init_col, dtype=np.float64)
    if col.shape != (n + m + 1,):
        raise DimensionError(f"need initial column of length {n + m + 1}")
    cols = [col]
    for i in range(n):
        prev = cols[-1]
        u00 = prev[:-1]
        u01 = prev[1:]
        bad = np.abs(1.0 + u00) <= _PSI_GUARD
        if bad.any():
            raise ZeroDivisionCell((i, int(np.argwhere(bad)[0])), "1 + u00")
        cols.append((1.0 + u01) * u00 / (1.0 + u00))
    rect = np.column_stack([c[: m + 1] for c in cols]).T
    return Grid(rect)
