"""Numerical reconstruction and certification of the linearizing transform.

For a passing equation the scaling function is recovered pointwise from
the derivative-ratio identity with two arguments frozen at reference
values,

    alpha(x) = A * F_u10(x, r, s) / F_u00(x, r, s),

normalized to alpha(x_ref) = 1 at the box midpoint.  The transform itself
solves alpha * dPsi/dx = 1, i.e. Psi(x) is the antiderivative of 1/alpha
from x_ref, built by adaptive Simpson over a cubic interpolant of the
alpha table.  The gauge Psi(x_ref) = 0, Psi'(x_ref) = 1 makes outputs
reproducible; the transform is only ever determined up to affine maps.

Certification fits Psi(F) against [Psi(u00), Psi(u10), Psi(u01), 1] by
least squares and checks the normalized residual; the round trip then
compares evolving-then-mapping against mapping-then-evolving on a grid.

The alpha table spans the sample box together with the sampled range of
F over the box cube, so Psi(F) is evaluable during the fit; round-trip
verification widens the table again to cover the evolved grid.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import (CertificationFailure, DegenerateDerivative, DomainError,
                     QuadratureFailure, RankDeficient, SignChange)
from .lattice import evolve_quad, make_staircase
from .linearize import LinearizabilityReport, QuadEquation
from .quadrature import adaptive_simpson

__all__ = [
    "AlphaTable",
    "PointTransform",
    "LinearModel",
    "recover_alpha",
    "build_psi",
    "fit_linear_model",
    "roundtrip_verify",
]

_ZERO_DERIV = 1e-12
_F_PROBE = 400
_PAD_FRACTION = 0.02
CERTIFY_TOL = 1e-6
QUAD_TOL = 1e-10
# relative fallback for interior psi evaluation and extended tables whose
# integrand scale makes a pure absolute target unreachable in float64
_QUAD_RTOL = 1e-12


@dataclass(frozen=True)
class AlphaTable:
    """Tabulated scaling function alpha on [xs[0], xs[-1]], normalized so
    alpha(x_ref) = 1.  Keeps what is needed to re-derive itself on a wider
    interval: the equation, the ratio constant and the frozen pair."""

    eq: QuadEquation
    A: float
    x_ref: float
    frozen: tuple[float, float]
    xs: np.ndarray
    alphas: np.ndarray

    @property
    def interval(self) -> tuple[float, float]:
        return (float(self.xs[0]), float(self.xs[-1]))

    def pairs(self) -> list[tuple[float, float]]:
        return [(float(x), float(a)) for x, a in zip(self.xs, self.alphas)]


def _alpha_raw(eq: QuadEquation, A: float, frozen, x: float) -> float:
    # guard=0: knot evaluation is deterministic, tiny-but-conditioned
    # arguments are legitimate (grids may decay toward a domain boundary)
    r, s = frozen
    d = eq.partials((x, r, s), guard=0.0).partials
    if abs(d[0]) <= _ZERO_DERIV:
        raise DegenerateDerivative(f"F_u00 vanishes at knot x={x}")
    return A * d[1] / d[0]


def _covering_interval(eq: QuadEquation) -> tuple[float, float]:
    lo, hi = eq.sample_box
    rng = np.random.default_rng(12345)
    pts = rng.uniform(lo, hi, (_F_PROBE, 3))
    f_vals = []
    for p in pts:
        try:
            f_vals.append(eq.f(p))
        except DomainError:
            continue
    f_lo = min(f_vals, default=lo)
    f_hi = max(f_vals, default=hi)
    lo_cov = min(lo, f_lo)
    hi_cov = max(hi, f_hi)
    pad = _PAD_FRACTION * (hi_cov - lo_cov)
    # pad multiplicatively toward zero so a domain boundary at 0 survives
    if lo_cov - pad <= 0.0 < lo_cov:
        lo_cov = 0.5 * lo_cov
    else:
        lo_cov -= pad
    return lo_cov, hi_cov + pad


def recover_alpha(eq: QuadEquation, report: LinearizabilityReport,
                  knots: int = 257, frozen: tuple[float, float] | None = None,
                  force: bool = False) -> AlphaTable:
    """Tabulate alpha over the covering interval at uniformly spaced knots.

    Requires a passing report (``force`` overrides, for negative-control
    fits).  Raises SignChange if the raw table is not single-signed.
    """
    if not report.passed and not force:
        raise CertificationFailure(
            "equation did not pass the necessary conditions; "
            "use force=True to build a transform anyway")
    if knots < 8:
        raise ValueError("need at least 8 knots")
    x_ref = eq.midpoint
    if frozen is None:
        frozen = (x_ref, x_ref)
    lo, hi = _covering_interval(eq)
    xs = np.linspace(lo, hi, knots)
    raw = np.array([_alpha_raw(eq, report.A, frozen, x) for x in xs])
    ref = _alpha_raw(eq, report.A, frozen, x_ref)
    if np.any(raw == 0.0) or np.any(np.sign(raw) != np.sign(ref)):
        raise SignChange("alpha changes sign on the table")
    return AlphaTable(eq=eq, A=report.A, x_ref=x_ref, frozen=tuple(frozen),
                      xs=xs, alphas=raw / ref)


@dataclass(frozen=True)
class PointTransform:
    """Quadrature-built antiderivative Psi with Psi(x_ref) = 0."""

    table: AlphaTable
    spline: CubicSpline
    psis: np.ndarray  # Psi at the table knots
    monotone: bool

    @property
    def x_ref(self) -> float:
        return self.table.x_ref

    @property
    def interval(self) -> tuple[float, float]:
        return self.table.interval

    def _inv_alpha(self, x: float) -> float:
        return 1.0 / float(self.spline(x))

    def psi(self, x):
        """Psi at a scalar or array of points inside the table interval."""
        xs = self.table.xs
        arr = np.atleast_1d(np.asarray(x, dtype=np.float64))
        lo, hi = self.interval
        if arr.min() < lo - 1e-12 or arr.max() > hi + 1e-12:
            raise DomainError("Psi", (float(arr.min()), float(arr.max())))
        idx = np.clip(np.searchsorted(xs, arr, side="right") - 1, 0, len(xs) - 2)
        out = np.empty_like(arr)
        for i, (xi, j) in enumerate(zip(arr, idx)):
            knot = xs[j]
            if xi == knot:
                out[i] = self.psis[j]
            else:
                out[i] = self.psis[j] + adaptive_simpson(
                    self._inv_alpha, knot, float(xi), tol=1e-12, rtol=_QUAD_RTOL)
        return out if np.ndim(x) else float(out[0])

    def __call__(self, x):
        return self.psi(x)

    def knot_pairs(self) -> list[tuple[float, float]]:
        return self.table.pairs()


def build_psi(table: AlphaTable, tol: float = QUAD_TOL) -> PointTransform:
    """Integrate 1/alpha through a cubic interpolant of the table.

    The absolute tolerance is distributed over the knot intervals in
    proportion to their length.  Monotonicity of Psi over the knots is
    verified and recorded.
    """
    spline = CubicSpline(table.xs, table.alphas)
    xs = table.xs
    n = len(xs)
    span = xs[-1] - xs[0]
    inv = lambda x: 1.0 / float(spline(x))
    increments = np.empty(n - 1)
    for j in range(n - 1):
        seg_tol = tol * (xs[j + 1] - xs[j]) / span
        increments[j] = adaptive_simpson(inv, float(xs[j]), float(xs[j + 1]),
                                         tol=seg_tol, rtol=_QUAD_RTOL)
    # accumulate outward from the knot nearest x_ref: Psi can span many
    # orders of magnitude on extended tables, and a one-sided cumsum would
    # cancel catastrophically in the interior where Psi is O(1)
    j_ref = int(np.clip(np.searchsorted(xs, table.x_ref, side="right") - 1, 0, n - 2))
    psis = np.empty(n)
    psis[j_ref] = 0.0
    psis[j_ref + 1:] = np.cumsum(increments[j_ref:])
    if j_ref > 0:
        psis[:j_ref] = -np.cumsum(increments[:j_ref][::-1])[::-1]
    offset = 0.0
    if table.x_ref != xs[j_ref]:
        offset = adaptive_simpson(inv, float(xs[j_ref]), float(table.x_ref),
                                  tol=1e-12, rtol=_QUAD_RTOL)
    psis -= offset
    diffs = np.diff(psis)
    monotone = bool(np.all(diffs > 0) or np.all(diffs < 0))
    return PointTransform(table=table, spline=spline, psis=psis, monotone=monotone)


_MARCH_RATIO = 1.02       # max relative change of alpha between knots
_MARCH_TIGHT = 1.005      # grow the step while change stays below this
_MARCH_MAX_KNOTS = 60000


def _march(alpha, x_from: float, x_to: float, dx0: float) -> list[float]:
    """Knots from x_from toward x_to keeping |alpha| ratios between
    consecutive knots within _MARCH_RATIO.  Handles alpha varying over
    many decades (grids decaying toward a singular edge of Psi) where any
    fixed spacing would either miss the variation or explode the table."""
    out = []
    x = x_from
    a = alpha(x)
    direction = 1.0 if x_to > x_from else -1.0
    dx = dx0
    lo_r, hi_r = 1.0 / _MARCH_RATIO, _MARCH_RATIO
    while (x_to - x) * direction > 0:
        if len(out) > _MARCH_MAX_KNOTS:
            raise QuadratureFailure("alpha table extension exceeded knot budget")
        # the refinement floor is relative to the local scale so descents
        # toward zero stay geometric and far-out regions can still refine
        floor = abs(x) * 1e-9 + 1e-300
        step = min(dx, abs(x_to - x))
        x_next = x + direction * step
        if (x_to - x_next) * direction <= 0:
            x_next = x_to
        a_next = alpha(x_next)
        ratio = a_next / a
        if ratio <= 0:
            raise SignChange("alpha changes sign on the extended table")
        if (ratio < lo_r or ratio > hi_r) and step > floor:
            dx = step / 2.0
            continue
        out.append(x_next)
        x, a = x_next, a_next
        if 1.0 / _MARCH_TIGHT < ratio < _MARCH_TIGHT:
            dx = step * 2.0
    # the final clamp onto x_to can leave a vanishing interval behind it
    if len(out) >= 2 and abs(out[-1] - out[-2]) < 1e-12 * abs(out[-1]):
        del out[-2]
    return out


def _extend(psi: PointTransform, lo: float, hi: float) -> PointTransform:
    """Rebuild the transform on a wider interval, keeping the base knots,
    the frozen pair and the normalization; new knots are placed adaptively."""
    t = psi.table
    cur_lo, cur_hi = t.interval
    lo = min(lo, cur_lo)
    hi = max(hi, cur_hi)
    if lo == cur_lo and hi == cur_hi:
        return psi
    dx0 = (cur_hi - cur_lo) / (len(t.xs) - 1)
    alpha = lambda x: _alpha_raw(t.eq, t.A, t.frozen, x)
    xs = list(t.xs)
    if lo < cur_lo:
        xs = sorted(_march(alpha, cur_lo, lo, dx0)) + xs
    if hi > cur_hi:
        xs = xs + _march(alpha, cur_hi, hi, dx0)
    xs = np.asarray(xs)
    # drop any knot pair too close for a well-conditioned spline
    gaps = np.diff(xs)
    keep = np.concatenate(([True], gaps > np.abs(xs[1:]) * 1e-13))
    xs = xs[keep]
    raw = np.array([alpha(x) for x in xs])
    ref = alpha(t.x_ref)
    if np.any(raw == 0.0) or np.any(np.sign(raw) != np.sign(ref)):
        raise SignChange("alpha changes sign on the extended table")
    wider = AlphaTable(eq=t.eq, A=t.A, x_ref=t.x_ref, frozen=t.frozen,
                       xs=xs, alphas=raw / ref)
    return build_psi(wider)


@dataclass
class LinearModel:
    """Fitted affine image: Psi(F) ~ p*Psi(u00) + q*Psi(u10) + r*Psi(u01) + s."""

    p: float
    q: float
    r: float
    s: float
    fit_residual: float
    certified: bool
    tol: float
    samples_used: int

    def coefficients(self) -> tuple[float, float, float, float]:
        return (self.p, self.q, self.r, self.s)

    def to_dict(self) -> dict:
        return {"p": self.p, "q": self.q, "r": self.r, "s": self.s,
                "residual": self.fit_residual, "certified": self.certified}


def fit_linear_model(eq: QuadEquation, psi: PointTransform, n_samples: int = 300,
                     seed: int = 0, tol: float = CERTIFY_TOL) -> LinearModel:
    """Least-squares fit of Psi(F) on the mapped arguments plus intercept.

    Samples are drawn from the box cube and kept only when F lands inside
    the transform's interval, with at most 10x oversampling.  A residual
    above ``tol`` yields an uncertified model (reported, not raised).
    """
    lo, hi = eq.sample_box
    p_lo, p_hi = psi.interval
    rng = np.random.default_rng(seed)
    pts = []
    f_vals = []
    attempts = 0
    while len(pts) < n_samples and attempts < 10 * n_samples:
        batch = rng.uniform(lo, hi, (n_samples, 3))
        for p in batch:
            attempts += 1
            if len(pts) >= n_samples or attempts > 10 * n_samples:
                break
            try:
                fv = eq.f(p)
            except DomainError:
                continue
            if p_lo <= fv <= p_hi:
                pts.append(p)
                f_vals.append(fv)
    if len(pts) < max(8, n_samples // 2):
        raise RankDeficient(
            f"only {len(pts)} usable samples after 10x oversampling")
    pts = np.asarray(pts)
    targets = psi.psi(np.asarray(f_vals))
    design = np.column_stack([
        psi.psi(pts[:, 0]),
        psi.psi(pts[:, 1]),
        psi.psi(pts[:, 2]),
        np.ones(len(pts)),
    ])
    coef, _, rank, _ = np.linalg.lstsq(design, targets, rcond=None)
    if rank < 4:
        raise RankDeficient("design matrix is numerically singular")
    resid = np.abs(design @ coef - targets)
    scale = 1.0 + max(np.abs(targets).max(), np.abs(design[:, :3]).max())
    fit_residual = float(resid.max() / scale)
    p, q, r, s = (float(c) for c in coef)
    return LinearModel(p=p, q=q, r=r, s=s, fit_residual=fit_residual,
                       certified=fit_residual <= tol, tol=float(tol),
                       samples_used=len(pts))


def roundtrip_verify(eq: QuadEquation, psi: PointTransform, model: LinearModel,
                     n: int, m: int, seed: int = 0, force: bool = False) -> float:
    """Scale-normalized discrepancy between the two paths to the w-grid.

    Path one evolves the nonlinear equation and maps the full grid through
    Psi; path two maps only the staircase and evolves the fitted affine
    equation.  Returns max|w1 - w2| / (1 + max|w|); the normalization is
    required because the linear field grows geometrically with grid size,
    so an absolute gap would be dominated by float64 rounding at any
    nontrivial depth.
    """
    if not model.certified and not force:
        raise CertificationFailure(
            f"model residual {model.fit_residual} exceeds {model.tol}")
    init = make_staircase(n, m, seed=seed, interval=eq.sample_box)
    u = evolve_quad(eq, init)
    psi_w = _extend(psi, float(u.values.min()), float(u.values.max()))

    w1 = psi_w.psi(u.values.reshape(-1)).reshape(u.values.shape)

    w2 = np.empty_like(w1)
    w2[:, 0] = psi_w.psi(u.values[:, 0])
    w2[0, :] = psi_w.psi(u.values[0, :])
    p, q, r, s = model.coefficients()
    rows, cols = w2.shape
    for d in range(2, rows + cols - 1):
        for i in range(max(1, d - cols + 1), min(rows - 1, d - 1) + 1):
            j = d - i
            w2[i, j] = p * w2[i - 1, j - 1] + q * w2[i, j - 1] + r * w2[i - 1, j] + s

    scale = 1.0 + max(np.abs(w1).max(), np.abs(w2).max())
    return float(np.abs(w1 - w2).max() / scale)
