"""Shared test utilities: a seeded random AST generator (restricted to
shapes the parser itself can produce, so printing round-trips), and the
central finite-difference oracle for derivative checks."""

from __future__ import annotations

import math
import random
from fractions import Fraction

from quadlin import expr as E
from quadlin.errors import QuadlinError

SITES = ("u00", "u10", "u01")


def random_ast(rng: random.Random, depth: int):
    """Random expression tree of depth <= depth.

    Constants are decimal-friendly rationals, exponents small, and Neg
    never wraps a bare constant (the parser folds that form away)."""
    if depth == 0 or rng.random() < 0.3:
        if rng.random() < 0.65:
            return E.Var(rng.choice(SITES))
        mantissa = rng.randint(1, 400)
        scale = rng.choice((1, 10, 100))
        return E.Const(Fraction(mantissa, scale))
    kind = rng.choice(("add", "sub", "mul", "div", "neg", "pow", "exp", "log"))
    child = lambda: random_ast(rng, depth - 1)
    if kind == "add":
        return E.Add(child(), child())
    if kind == "sub":
        return E.Sub(child(), child())
    if kind == "mul":
        return E.Mul(child(), child())
    if kind == "div":
        return E.Div(child(), child())
    if kind == "neg":
        inner = child()
        if isinstance(inner, E.Const):
            return E.Const(-inner.value)
        return E.Neg(inner)
    if kind == "pow":
        exponent = rng.choice((Fraction(2), Fraction(3), Fraction(-1),
                               Fraction(-2), Fraction(1, 2), Fraction(3, 2)))
        return E.Pow(child(), exponent)
    if kind == "exp":
        return E.Exp(child())
    return E.Log(child())


def random_point(rng: random.Random, lo=0.3, hi=1.6):
    return tuple(rng.uniform(lo, hi) for _ in range(3))


def central_differences(e: E.Expression, point, h: float = 1e-6):
    """Finite-difference gradient; raises QuadlinError if any stencil
    point leaves the domain."""
    grads = []
    for k in range(3):
        plus = list(point)
        minus = list(point)
        plus[k] += h
        minus[k] -= h
        env_p = dict(zip(SITES, plus))
        env_m = dict(zip(SITES, minus))
        grads.append((E.evaluate(e, env_p) - E.evaluate(e, env_m)) / (2 * h))
    return tuple(grads)


def sample_dual_cases(seed: int, count: int, max_depth: int = 6,
                      value_cap: float = 1e3):
    """Yield ``count`` (expression, point, dual) triples whose values and
    partials are moderate and whose finite-difference stencils stay in
    the domain.  Every evaluation along the way is checked for NaN/inf
    escapes; the generator counts (and returns) rejected candidates."""
    rng = random.Random(seed)
    cases = []
    rejected = 0
    while len(cases) < count:
        e = E.Expression(random_ast(rng, rng.randint(1, max_depth)))
        point = random_point(rng)
        try:
            dual = E.eval_with_partials(e, point)
            central_differences(e, point)
        except QuadlinError:
            rejected += 1
            continue
        values = (dual.value,) + dual.partials
        if not all(math.isfinite(v) for v in values):
            raise AssertionError(f"NaN/inf escaped typed errors for {e!r}")
        if any(abs(v) > value_cap for v in values):
            rejected += 1
            continue
        cases.append((e, point, dual))
    return cases, rejected
