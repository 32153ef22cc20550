"""Exact rational functions of one auxiliary variable over BigPoly.

Canonical form invariants: the denominator is nonzero with positive
leading coefficient, gcd(num, den) = 1 and the pair carries no common
integer content.  Every arithmetic operation restores the invariants.
Addition and multiplication use the classic small-gcd decompositions so
reductions run on the smallest factors available.

Also provides evaluation of the equation DSL over this backend, which is
what the entropy screen iterates.
"""

from __future__ import annotations

import math
from fractions import Fraction

from . import expr as E
from .bigpoly import BigPoly
from .errors import DivisionByZeroFunction, NonRationalEquation, UnboundParam

__all__ = ["RationalFunction1D", "evaluate_exact"]

_ONE = BigPoly((1,))


class RationalFunction1D:
    __slots__ = ("num", "den")

    def __init__(self, num: BigPoly, den: BigPoly = _ONE, reduce: bool = True):
        if den.is_zero:
            raise DivisionByZeroFunction("zero denominator polynomial")
        if num.is_zero:
            num, den = BigPoly(), _ONE
        elif reduce:
            g = num.gcd(den)
            if g.degree() > 0:
                num = num.divexact(g)
                den = den.divexact(g)
            c = math.gcd(num.content(), den.content())
            if den.leading < 0:
                c = -c
            if c != 1:
                num = BigPoly._raw(tuple(x // c for x in num.coeffs))
                den = BigPoly._raw(tuple(x // c for x in den.coeffs))
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, *a):  # pragma: no cover - guard only
        raise AttributeError("RationalFunction1D is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_fraction(cls, f: Fraction) -> "RationalFunction1D":
        return cls(BigPoly.const(f.numerator), BigPoly.const(f.denominator),
                   reduce=False)

    @classmethod
    def from_int(cls, n: int) -> "RationalFunction1D":
        return cls(BigPoly.const(n), _ONE, reduce=False)

    @classmethod
    def linear(cls, a: int, b: int) -> "RationalFunction1D":
        """a*z + b as a rational function."""
        return cls(BigPoly.linear(a, b), _ONE, reduce=False)

    # -- structure ---------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    def degree_max(self) -> int:
        """max(deg num, deg den); 0 for the zero function."""
        return max(self.num.degree(), self.den.degree(), 0)

    def __eq__(self, other):
        return (isinstance(other, RationalFunction1D)
                and self.num == other.num and self.den == other.den)

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"RationalFunction1D({list(self.num.coeffs)}, {list(self.den.coeffs)})"

    def eval_fraction(self, z: Fraction) -> Fraction:
        den = self.den.eval_fraction(z)
        if den == 0:
            raise DivisionByZeroFunction(f"denominator vanishes at z={z}")
        return self.num.eval_fraction(z) / den

    # -- arithmetic --------------------------------------------------------

    def __add__(self, o: "RationalFunction1D") -> "RationalFunction1D":
        if self.is_zero:
            return o
        if o.is_zero:
            return self
        g = self.den.gcd(o.den)
        if g.degree() == 0 and g.leading == 1:
            num = self.num * o.den + o.num * self.den
            return RationalFunction1D(num, self.den * o.den)
        d1 = self.den.divexact(g)
        d2 = o.den.divexact(g)
        t = self.num * d2 + o.num * d1
        g2 = t.gcd(g)
        if not (g2.degree() == 0 and g2.leading == 1):
            t = t.divexact(g2)
            g = g.divexact(g2)
        return RationalFunction1D(t, d1 * d2 * g)

    def __sub__(self, o: "RationalFunction1D") -> "RationalFunction1D":
        return self + (-o)

    def __neg__(self) -> "RationalFunction1D":
        return RationalFunction1D(-self.num, self.den, reduce=False)

    def __mul__(self, o: "RationalFunction1D") -> "RationalFunction1D":
        if self.is_zero or o.is_zero:
            return RationalFunction1D(BigPoly(), _ONE, reduce=False)
        g1 = self.num.gcd(o.den)
        g2 = o.num.gcd(self.den)
        n1 = self.num.divexact(g1) if g1.degree() > 0 else self.num
        d2 = o.den.divexact(g1) if g1.degree() > 0 else o.den
        n2 = o.num.divexact(g2) if g2.degree() > 0 else o.num
        d1 = self.den.divexact(g2) if g2.degree() > 0 else self.den
        return RationalFunction1D(n1 * n2, d1 * d2)

    def __truediv__(self, o: "RationalFunction1D") -> "RationalFunction1D":
        if o.is_zero:
            raise DivisionByZeroFunction("division by the zero function")
        return self * RationalFunction1D(o.den, o.num, reduce=False)

    def pow_int(self, n: int) -> "RationalFunction1D":
        if n == 0:
            return RationalFunction1D.from_int(1)
        base = self if n > 0 else RationalFunction1D.from_int(1) / self
        n = abs(n)
        result = None
        while n:
            if n & 1:
                result = base if result is None else result * base
            n >>= 1
            if n:
                base = base * base
        return result


def evaluate_exact(e: E.Expression, env) -> RationalFunction1D:
    """Evaluate the DSL over exact rational functions.

    ``env`` maps site names to RationalFunction1D.  Exp/Log and fractional
    powers are rejected (the entropy screen gates on rationality first).
    """
    def ev(node) -> RationalFunction1D:
        if isinstance(node, E.Var):
            return env[node.site]
        if isinstance(node, E.Const):
            return RationalFunction1D.from_fraction(node.value)
        if isinstance(node, E.Param):
            raise UnboundParam(node.name)
        if isinstance(node, E.Add):
            return ev(node.left) + ev(node.right)
        if isinstance(node, E.Sub):
            return ev(node.left) - ev(node.right)
        if isinstance(node, E.Mul):
            return ev(node.left) * ev(node.right)
        if isinstance(node, E.Div):
            return ev(node.left) / ev(node.right)
        if isinstance(node, E.Neg):
            return -ev(node.operand)
        if isinstance(node, E.Pow):
            if node.exponent.denominator != 1:
                raise NonRationalEquation("fractional exponent")
            return ev(node.base).pow_int(node.exponent.numerator)
        raise NonRationalEquation(f"{type(node).__name__} is not rational")

    return ev(e.root)
