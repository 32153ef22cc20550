"""Adaptive Simpson quadrature with a hard subdivision budget.

Recursive bisection with the classical 15x error estimate and Richardson
extrapolation on accept.  The budget counts accepted subintervals; blowing
it raises QuadratureFailure instead of returning a degraded value.
"""

from __future__ import annotations

from typing import Callable

from .errors import QuadratureFailure

MAX_SUBDIVISIONS = 1 << 20


def adaptive_simpson(f: Callable[[float], float], a: float, b: float,
                     tol: float = 1e-10, rtol: float = 0.0) -> float:
    """Integrate f over [a, b] to absolute tolerance ``tol``.

    ``rtol`` optionally relaxes the acceptance test to
    max(tol, rtol*|segment estimate|) for integrands whose scale makes an
    absolute target unreachable in float64.
    """
    if a == b:
        return 0.0
    if a > b:
        return -adaptive_simpson(f, b, a, tol, rtol)

    budget = [MAX_SUBDIVISIONS]

    def simpson(fa, fm, fb, h):
        return h / 6.0 * (fa + 4.0 * fm + fb)

    def recurse(a, fa, b, fb, m, fm, whole, tol):
        budget[0] -= 1
        if budget[0] <= 0:
            raise QuadratureFailure(
                f"tolerance unreachable within {MAX_SUBDIVISIONS} subdivisions")
        lm = 0.5 * (a + m)
        rm = 0.5 * (m + b)
        flm = f(lm)
        frm = f(rm)
        left = simpson(fa, flm, fm, m - a)
        right = simpson(fm, frm, fb, b - m)
        err = (left + right - whole) / 15.0
        if abs(err) <= max(tol, rtol * abs(left + right)):
            return left + right + err
        half = 0.5 * tol
        return (recurse(a, fa, m, fm, lm, flm, left, half)
                + recurse(m, fm, b, fb, rm, frm, right, half))

    fa, fb = f(a), f(b)
    m = 0.5 * (a + b)
    fm = f(m)
    whole = simpson(fa, fm, fb, b - a)
    return recurse(a, fa, b, fb, m, fm, whole, tol)
