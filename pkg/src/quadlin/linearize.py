"""Sampling-based linearizability conditions and affine-linearity detection.

For an explicit quad equation u11 = F(u00, u10, u01) that is linearizable
by a point transformation, the three derivative ratios

    A(x, u01) = F_u00 / F_u10  on u00 = u10 = x
    B(x, u10) = F_u00 / F_u01  on u00 = u01 = x
    C(x, u00) = F_u01 / F_u10  on u10 = u01 = x

are constants equal to the coefficient ratios a/b, a/c, c/b of the target
linear equation, each ratio is independent of the excluded variable, and
A = B*C.  All six constancy statements are exact identities, so they are
tested by sampling with dual-number derivatives (no finite-difference
noise) against a tight default tolerance.  The conditions are necessary;
sufficiency is certified downstream by actually building the transform.
They were derived for multilinear equations, so reports carry a
"necessary-conditions" mode marker when applied to arbitrary DSL input.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateDerivative, DomainError
from .expr import Expression, eval_with_partials, evaluate, parse

__all__ = [
    "QuadEquation",
    "LinearizabilityReport",
    "AffineCoefficients",
    "check_conditions",
    "detect_affine_linear",
]

DEFAULT_BOX = (0.2, 1.7)
DEFAULT_GUARD = 1e-8
DEFAULT_TOL = 1e-7

# a partial below this is treated as vanished for ratio purposes
_ZERO_DERIV = 1e-12
# construction probes this many points and requires 90% evaluability
_PROBE_COUNT = 200
_PROBE_MIN_FRACTION = 0.9


class QuadEquation:
    """Explicit quad equation u11 = F(u00, u10, u01) plus sampling metadata.

    ``sample_box`` is the interval each argument is drawn from during the
    sampling checks; ``guard`` is the minimum |denominator| treated as
    nonsingular.  Construction verifies that F evaluates on at least 90%
    of uniformly sampled points of the box cube.
    """

    __slots__ = ("rhs", "sample_box", "guard", "name")

    def __init__(self, rhs: Expression | str, sample_box=DEFAULT_BOX,
                 guard: float = DEFAULT_GUARD, params=None, name: str = ""):
        if isinstance(rhs, str):
            rhs = parse(rhs, params)
        if not rhs.sites:
            raise ValueError("right-hand side references no site variable")
        lo, hi = float(sample_box[0]), float(sample_box[1])
        if not lo < hi:
            raise ValueError(f"sample box needs lo < hi, got [{lo}, {hi}]")
        object.__setattr__(self, "rhs", rhs)
        object.__setattr__(self, "sample_box", (lo, hi))
        object.__setattr__(self, "guard", float(guard))
        object.__setattr__(self, "name", name)
        ok = 0
        rng = np.random.default_rng(0)
        pts = rng.uniform(lo, hi, (_PROBE_COUNT, 3))
        for p in pts:
            try:
                self.f(p)
                ok += 1
            except DomainError:
                pass
        if ok < _PROBE_MIN_FRACTION * _PROBE_COUNT:
            raise ValueError(
                f"F evaluable on only {ok}/{_PROBE_COUNT} sampled points of "
                f"box {self.sample_box}^3")

    def __setattr__(self, *a):  # pragma: no cover - guard only
        raise AttributeError("QuadEquation is immutable")

    @property
    def midpoint(self) -> float:
        lo, hi = self.sample_box
        return 0.5 * (lo + hi)

    def f(self, point, guard: float | None = None) -> float:
        g = self.guard if guard is None else guard
        return evaluate(self.rhs, {"u00": point[0], "u10": point[1], "u01": point[2]},
                        div_guard=g)

    def partials(self, point, guard: float | None = None):
        g = self.guard if guard is None else guard
        return eval_with_partials(self.rhs, point, div_guard=g)

    def __repr__(self):
        from .expr import print_expression
        return f"QuadEquation({print_expression(self.rhs)!r}, box={self.sample_box})"


@dataclass
class LinearizabilityReport:
    """Outcome of the six-condition sampling check."""

    passed: bool
    A: float
    B: float
    C: float
    residuals: list  # r1..r6
    consistency_residual: float
    failing_condition: int | None
    samples_used: int
    seed: int
    tol: float
    mode: str = "necessary-conditions"

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "A": self.A,
            "B": self.B,
            "C": self.C,
            "residuals": list(self.residuals),
            "consistency": self.consistency_residual,
            "failing_condition": self.failing_condition,
            "mode": self.mode,
            "samples_used": self.samples_used,
        }


def _rel_spread(vals: np.ndarray) -> float:
    med = float(np.median(vals))
    return float(np.max(np.abs(vals - med))) / (1.0 + abs(med))


def check_conditions(eq: QuadEquation, n_samples: int = 200, seed: int = 0,
                     tol: float = DEFAULT_TOL) -> LinearizabilityReport:
    """Sample the six ratio conditions and report residuals.

    r1..r3 are the max relative deviations of A, B, C from their medians;
    r4..r6 probe independence from the excluded variable by evaluating the
    ratio at five values of it and taking the relative spread.  Passing
    additionally requires |A - B*C| <= tol*(1+|A|).  Samples where the
    denominator partial vanishes are excluded from the statistics; if any
    needed partial vanishes on more than 10% of samples the check aborts
    with DegenerateDerivative.
    """
    if n_samples < 50:
        raise ValueError("need at least 50 samples")
    lo, hi = eq.sample_box
    rng = np.random.default_rng(seed)
    triples = rng.uniform(lo, hi, (n_samples, 3))
    probe = np.linspace(lo, hi, 5)

    ratios = {1: [], 2: [], 3: []}
    spreads = {4: [], 5: [], 6: []}
    dead = {1: 0, 2: 0, 3: 0}

    # (condition, point builder, numerator slot, denominator slot)
    tied = {
        1: (lambda s, t: (s, s, t), 0, 1),
        2: (lambda s, t: (s, t, s), 0, 2),
        3: (lambda s, t: (t, s, s), 2, 1),
    }
    # excluded-variable scans: (pair slots kept, scanned slot)
    scans = {
        4: (lambda s, t, x: (s, t, x), 0, 1),
        5: (lambda s, t, x: (s, x, t), 0, 2),
        6: (lambda s, t, x: (x, s, t), 2, 1),
    }

    for s, t, v in triples:
        for idx, (mk, num_slot, den_slot) in tied.items():
            d = eq.partials(mk(s, t)).partials
            if abs(d[den_slot]) <= _ZERO_DERIV or abs(d[num_slot]) <= _ZERO_DERIV:
                dead[idx] += 1
                continue
            ratios[idx].append(d[num_slot] / d[den_slot])
        for idx, (mk, num_slot, den_slot) in scans.items():
            vals = []
            for x in probe:
                d = eq.partials(mk(s, t, x)).partials
                if abs(d[den_slot]) <= _ZERO_DERIV:
                    vals = None
                    break
                vals.append(d[num_slot] / d[den_slot])
            if vals is None:
                continue
            vals = np.asarray(vals)
            med = float(np.median(vals))
            spreads[idx].append(float(vals.max() - vals.min()) / (1.0 + abs(med)))

    for idx, n_dead in dead.items():
        if n_dead > 0.1 * n_samples:
            raise DegenerateDerivative(
                f"a partial derivative needed by condition {idx} vanishes on "
                f"{n_dead}/{n_samples} samples")

    a_vals = np.asarray(ratios[1])
    b_vals = np.asarray(ratios[2])
    c_vals = np.asarray(ratios[3])
    r = [
        _rel_spread(a_vals),
        _rel_spread(b_vals),
        _rel_spread(c_vals),
        max(spreads[4], default=0.0),
        max(spreads[5], default=0.0),
        max(spreads[6], default=0.0),
    ]
    A = float(np.median(a_vals))
    B = float(np.median(b_vals))
    C = float(np.median(c_vals))
    consistency = abs(A - B * C)

    failing = None
    for i, ri in enumerate(r, start=1):
        if ri > tol:
            failing = i
            break
    passed = failing is None and consistency <= tol * (1.0 + abs(A))
    return LinearizabilityReport(
        passed=passed, A=A, B=B, C=C, residuals=r,
        consistency_residual=consistency, failing_condition=failing,
        samples_used=n_samples, seed=int(seed), tol=float(tol),
    )


@dataclass
class AffineCoefficients:
    """u11 = a*u00 + b*u10 + c*u01 + d, ordered by argument slot."""

    a: float
    b: float
    c: float
    d: float

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.a, self.b, self.c, self.d)


# second differences of an affine F are pure rounding noise (~1e-14 at
# desk scale); genuinely curved F gives ~h^2 * F'' ~ 1e-7 at h=1e-3
_AFFINE_H = 1e-3
_AFFINE_POINTS = 200


def detect_affine_linear(eq: QuadEquation, tol: float = 1e-8,
                         seed: int = 0) -> AffineCoefficients | None:
    """Decide whether F is affine in its three arguments jointly.

    Tests symmetric second differences in each argument and all three
    mixed second differences at sampled points; affine means every one of
    them stays below ``tol``.  Coefficients are then read off exactly from
    unit perturbations of the box midpoint.  Returns None when non-affine.
    """
    lo, hi = eq.sample_box
    h = _AFFINE_H
    rng = np.random.default_rng(seed)
    pts = rng.uniform(lo + h, hi - h, (_AFFINE_POINTS, 3))
    e = [np.array([1.0, 0.0, 0.0]), np.array([0.0, 1.0, 0.0]), np.array([0.0, 0.0, 1.0])]
    pairs = [(0, 1), (0, 2), (1, 2)]
    for p in pts:
        fp = eq.f(p)
        for k in range(3):
            second = eq.f(p + h * e[k]) - 2.0 * fp + eq.f(p - h * e[k])
            if abs(second) > tol:
                return None
        for j, k in pairs:
            mixed = (eq.f(p + h * e[j] + h * e[k]) - eq.f(p + h * e[j])
                     - eq.f(p + h * e[k]) + fp)
            if abs(mixed) > tol:
                return None
    base = np.array([eq.midpoint] * 3)
    f0 = eq.f(base)
    a = eq.f(base + e[0]) - f0
    b = eq.f(base + e[1]) - f0
    c = eq.f(base + e[2]) - f0
    d = f0 - a * base[0] - b * base[1] - c * base[2]
    return AffineCoefficients(a, b, c, d)
