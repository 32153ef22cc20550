"""Exact algebraic-entropy pre-screen via degree growth of lattice iterates.

The quad recurrence is iterated over a (K+1)x(K+1) corner in exact
rational-function arithmetic, starting from staircase data u_i = a_i*z + b_i
with nonzero integer coefficients drawn from [-5, 5].  The screened signal
is d_k, the max of numerator/denominator degree of the reduced diagonal
iterate (k, k): bounded degrees mean the flow is essentially trivial,
linear growth is the linearizability signature, exponential growth rules
it out.  This is a heuristic pre-screen: the thresholds below are artifact
choices, and every report is labeled accordingly.

Degree-1 polynomial (denominator-free) initial data keeps the linear
baseline exactly degree-constant; degenerate cancellations (a vanishing
denominator or a degree-0 iterate) trigger a reseeded retry.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (DegenerateTrajectory, DivisionByZeroFunction,
                     NonRationalEquation, TooShort)
from .expr import is_rational
from .linearize import QuadEquation
from .ratfunc import RationalFunction1D, evaluate_exact

__all__ = ["DegreeSequence", "degree_sequence", "classify_growth"]

MAX_RETRIES = 5
EXP_RATIO = 1.25
# linear growth tolerates gcd-induced jitter: over the trailing window the
# first differences may wobble but must stay within a band of width 2
_LINEAR_WINDOW = 5
_LINEAR_BAND = 2
_MIN_SLOPE = 0.5


@dataclass
class DegreeSequence:
    """Exact diagonal degrees and their growth classification."""

    degrees: list
    classification: str
    entropy_estimate: float
    seed: int
    retries: int = 0
    seed_stable: bool | None = None
    mode: str = "heuristic-prescreen"

    def to_dict(self) -> dict:
        d = {
            "degrees": list(self.degrees),
            "classification": self.classification,
            "entropy": self.entropy_estimate,
            "mode": self.mode,
        }
        if self.seed_stable is not None:
            d["seed_stable"] = self.seed_stable
        return d


def classify_growth(degrees) -> tuple[str, float]:
    """Apply the documented threshold rules to a degree list.

    constant: last three degrees equal and total growth at most 1 (a
    transient plateau of a growing sequence does not count).  linear:
    trailing first differences stay within a band of width 2 with mean
    slope >= 0.5.  exponential: the last three ratios all reach 1.25,
    with entropy estimate ln(d_K / d_{K-1}).  polynomial: anything else.
    """
    degrees = [int(d) for d in degrees]
    if len(degrees) < 4:
        raise TooShort(f"need at least 4 degrees, got {len(degrees)}")
    if (degrees[-1] == degrees[-2] == degrees[-3]
            and max(degrees) - min(degrees) <= 1):
        return "constant", 0.0
    diffs = np.diff(degrees)
    window = diffs[-min(_LINEAR_WINDOW, len(diffs)):]
    if window.max() - window.min() <= _LINEAR_BAND and window.mean() >= _MIN_SLOPE:
        return "linear", 0.0
    tail = degrees[-4:]
    if all(tail[i] > 0 and tail[i + 1] / tail[i] >= EXP_RATIO for i in range(3)):
        return "exponential", math.log(degrees[-1] / degrees[-2])
    return "polynomial", 0.0


def _nonzero_ints(rng, count: int):
    vals = rng.integers(1, 6, size=count) * rng.choice((-1, 1), size=count)
    return [int(v) for v in vals]


def _run_once(eq: QuadEquation, K: int, seed: int, attempt: int):
    rng = np.random.default_rng([seed, attempt])
    a = _nonzero_ints(rng, 2 * K + 1)
    b = _nonzero_ints(rng, 2 * K + 1)
    grid = {}
    for n in range(K + 1):
        grid[(n, 0)] = RationalFunction1D.linear(a[n], b[n])
    for m in range(1, K + 1):
        grid[(0, m)] = RationalFunction1D.linear(a[K + m], b[K + m])
    env = {}
    for s in range(2, 2 * K + 1):
        for n in range(max(1, s - K), min(K, s - 1) + 1):
            m = s - n
            env["u00"] = grid[(n - 1, m - 1)]
            env["u10"] = grid[(n, m - 1)]
            env["u01"] = grid[(n - 1, m)]
            grid[(n, m)] = evaluate_exact(eq.rhs, env)
    degrees = []
    for k in range(1, K + 1):
        d = grid[(k, k)].degree_max()
        if d == 0:
            raise DivisionByZeroFunction(f"degree collapsed to 0 at cell ({k},{k})")
        degrees.append(d)
    return degrees


def degree_sequence(eq: QuadEquation, K: int = 8, seed: int = 0,
                    check_stability: bool = False) -> DegreeSequence:
    """Exact diagonal degree sequence d_1..d_K with retry on degeneracy.

    ``check_stability`` reruns with two further seeds and records whether
    all surviving sequences agree elementwise (they can legitimately
    differ for equations with seed-dependent cancellation patterns; the
    flag reports it rather than failing).
    """
    if not is_rational(eq.rhs):
        raise NonRationalEquation("degree tracking needs a rational rhs")
    if K < 4:
        raise TooShort("need K >= 4")

    def run_with_retries(s: int):
        last_err = None
        for attempt in range(MAX_RETRIES):
            try:
                return _run_once(eq, K, s, attempt), attempt
            except DivisionByZeroFunction as err:
                last_err = err
        raise DegenerateTrajectory(
            f"all {MAX_RETRIES} retries degenerate for seed {s}: {last_err}")

    degrees, retries = run_with_retries(seed)
    classification, entropy = classify_growth(degrees)
    stable = None
    if check_stability:
        stable = True
        for extra in (seed + 1, seed + 2):
            other, _ = run_with_retries(extra)
            if other != degrees:
                stable = False
    return DegreeSequence(degrees=degrees, classification=classification,
                          entropy_estimate=entropy, seed=int(seed),
                          retries=retries, seed_stable=stable)
