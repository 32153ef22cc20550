"""First-order forward-mode numbers carrying three partial derivatives.

A DualValue is a real value together with its gradient with respect to the
three quad-equation arguments (u00, u10, u01).  Arithmetic follows the
sum/product/chain rules exactly; domain checking (division guards, log
positivity, overflow) is the evaluator's job, not this class's.
"""

from __future__ import annotations

import math
from fractions import Fraction


class DualValue:
    __slots__ = ("value", "d0", "d1", "d2")

    def __init__(self, value: float, d0: float = 0.0, d1: float = 0.0, d2: float = 0.0):
        self.value = value
        self.d0 = d0
        self.d1 = d1
        self.d2 = d2

    @classmethod
    def constant(cls, x: float) -> "DualValue":
        return cls(float(x), 0.0, 0.0, 0.0)

    @classmethod
    def seeded(cls, x: float, slot: int) -> "DualValue":
        d = [0.0, 0.0, 0.0]
        d[slot] = 1.0
        return cls(float(x), *d)

    @property
    def partials(self) -> tuple[float, float, float]:
        return (self.d0, self.d1, self.d2)

    def __repr__(self):
        return f"DualValue({self.value}, partials={self.partials})"

    def __add__(self, o: "DualValue") -> "DualValue":
        return DualValue(self.value + o.value, self.d0 + o.d0, self.d1 + o.d1, self.d2 + o.d2)

    def __sub__(self, o: "DualValue") -> "DualValue":
        return DualValue(self.value - o.value, self.d0 - o.d0, self.d1 - o.d1, self.d2 - o.d2)

    def __neg__(self) -> "DualValue":
        return DualValue(-self.value, -self.d0, -self.d1, -self.d2)

    def __mul__(self, o: "DualValue") -> "DualValue":
        a, b = self.value, o.value
        return DualValue(
            a * b,
            a * o.d0 + b * self.d0,
            a * o.d1 + b * self.d1,
            a * o.d2 + b * self.d2,
        )

    def __truediv__(self, o: "DualValue") -> "DualValue":
        # (d - v*od)/b rather than (d*b - a*od)/b**2: b**2 can underflow
        # to zero for legitimate tiny denominators
        b = o.value
        v = self.value / b
        return DualValue(
            v,
            (self.d0 - v * o.d0) / b,
            (self.d1 - v * o.d1) / b,
            (self.d2 - v * o.d2) / b,
        )

    def exp(self) -> "DualValue":
        e = math.exp(self.value)
        return DualValue(e, e * self.d0, e * self.d1, e * self.d2)

    def log(self) -> "DualValue":
        inv = 1.0 / self.value
        return DualValue(math.log(self.value), inv * self.d0, inv * self.d1, inv * self.d2)

    def pow_rational(self, e: Fraction) -> "DualValue":
        """x**e with d(x**e) = e*x**(e-1)*dx; caller guarantees the base is
        inside the domain for the exponent kind."""
        x = self.value
        if e.denominator == 1:
            n = e.numerator
            v = float(x ** n) if n >= 0 else 1.0 / float(x ** (-n))
            dv = float(n) * (x ** (n - 1) if n - 1 >= 0 else 1.0 / x ** (1 - n))
        else:
            fe = float(e)
            v = math.pow(x, fe)
            dv = fe * math.pow(x, fe - 1.0)
        return DualValue(v, dv * self.d0, dv * self.d1, dv * self.d2)
