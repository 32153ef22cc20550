"""Dense univariate polynomials over arbitrary-precision integers.

Coefficients are Python ints in ascending order with a nonzero leading
coefficient; the zero polynomial is the empty tuple.  Multiplication
switches to Kronecker substitution through GMP once operands are large
enough that packed-integer multiplication beats schoolbook.  GCDs use the
subresultant polynomial remainder sequence with content stripping, with a
sound shortcut: if the integer gcd of the two polynomials evaluated at a
common point is 1, the polynomial gcd is constant (the gcd's value divides
both), so the PRS can be skipped.
"""

from __future__ import annotations

import math
from fractions import Fraction

import gmpy2

__all__ = ["BigPoly"]

_KRONECKER_MIN = 48  # below this, schoolbook wins on interpreter overhead
_SHORTCUT_POINTS = (3, -7, 11)


def _trim(coeffs: list) -> tuple:
    n = len(coeffs)
    while n and coeffs[n - 1] == 0:
        n -= 1
    return tuple(coeffs[:n])


def _school_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return out


def _pack_split(p, nb: int) -> int:
    """p evaluated at 2**(8*nb), computed as positive-part minus
    negative-part so every byte window is carry-free."""
    zero = b"\x00" * nb
    pos = b"".join(c.to_bytes(nb, "little") if c > 0 else zero for c in p)
    neg = b"".join((-c).to_bytes(nb, "little") if c < 0 else zero for c in p)
    return int.from_bytes(pos, "little") - int.from_bytes(neg, "little")


def _kronecker_mul(a, b):
    """Multiply through one big-integer product (GMP) via Kronecker
    substitution at 2**B.  Signed coefficients are recovered by adding
    2**(B-1) to every window of the product, which is carry-free because
    every convolution coefficient is strictly below 2**(B-1)."""
    ma = max(abs(c) for c in a)
    mb = max(abs(c) for c in b)
    B = (ma.bit_length() + mb.bit_length()
         + min(len(a), len(b)).bit_length() + 2)
    B = (B + 7) & ~7
    nb = B >> 3
    prod = int(gmpy2.mpz(_pack_split(a, nb)) * gmpy2.mpz(_pack_split(b, nb)))
    n_out = len(a) + len(b) - 1
    half = 1 << (B - 1)
    ones = int.from_bytes((b"\x01" + b"\x00" * (nb - 1)) * n_out, "little")
    shifted = prod + (ones << (B - 1))
    raw = shifted.to_bytes(n_out * nb + nb, "little")
    return [int.from_bytes(raw[i * nb:(i + 1) * nb], "little") - half
            for i in range(n_out)]


class BigPoly:
    """Immutable integer polynomial; supports ring arithmetic, exact
    division, pseudo-remainders, gcd and exact evaluation."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        object.__setattr__(self, "coeffs", _trim([int(c) for c in coeffs]))

    def __setattr__(self, *a):  # pragma: no cover - guard only
        raise AttributeError("BigPoly is immutable")

    @classmethod
    def _raw(cls, coeffs: tuple) -> "BigPoly":
        p = object.__new__(cls)
        object.__setattr__(p, "coeffs", coeffs)
        return p

    @classmethod
    def const(cls, c: int) -> "BigPoly":
        return cls._raw((int(c),) if c else ())

    @classmethod
    def linear(cls, a: int, b: int) -> "BigPoly":
        """a*z + b"""
        return cls((b, a))

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def __eq__(self, other):
        return isinstance(other, BigPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"BigPoly({list(self.coeffs)})"

    def __add__(self, o: "BigPoly") -> "BigPoly":
        a, b = self.coeffs, o.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return BigPoly._raw(_trim(out))

    def __sub__(self, o: "BigPoly") -> "BigPoly":
        out = list(self.coeffs) + [0] * max(0, len(o.coeffs) - len(self.coeffs))
        for i, c in enumerate(o.coeffs):
            out[i] -= c
        return BigPoly._raw(_trim(out))

    def __neg__(self) -> "BigPoly":
        return BigPoly._raw(tuple(-c for c in self.coeffs))

    def __mul__(self, o: "BigPoly") -> "BigPoly":
        a, b = self.coeffs, o.coeffs
        if not a or not b:
            return BigPoly._raw(())
        if min(len(a), len(b)) < _KRONECKER_MIN:
            out = _school_mul(a, b)
        else:
            out = _kronecker_mul(a, b)
        return BigPoly._raw(_trim(out))

    def scale(self, c: int) -> "BigPoly":
        if c == 0:
            return BigPoly._raw(())
        return BigPoly._raw(tuple(c * x for x in self.coeffs))

    def shift(self, k: int) -> "BigPoly":
        """Multiply by z**k."""
        if not self.coeffs:
            return self
        return BigPoly._raw((0,) * k + self.coeffs)

    def eval_int(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_fraction(self, x: Fraction) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def content(self) -> int:
        return math.gcd(*(abs(c) for c in self.coeffs)) if self.coeffs else 0

    def primitive(self) -> "BigPoly":
        """Primitive part with positive leading coefficient."""
        if not self.coeffs:
            return self
        c = self.content()
        if self.leading < 0:
            c = -c
        return BigPoly._raw(tuple(x // c for x in self.coeffs))

    def divexact(self, d: "BigPoly") -> "BigPoly":
        """Exact division; raises ValueError if d does not divide self."""
        if d.is_zero:
            raise ZeroDivisionError("division by zero polynomial")
        if self.is_zero:
            return self
        rem = list(self.coeffs)
        dn = d.coeffs
        ld = dn[-1]
        n_out = len(rem) - len(dn) + 1
        if n_out <= 0:
            raise ValueError("not divisible (degree)")
        out = [0] * n_out
        for i in range(n_out - 1, -1, -1):
            q, r = divmod(rem[i + len(dn) - 1], ld)
            if r:
                raise ValueError("not divisible (leading)")
            out[i] = q
            if q:
                for j, c in enumerate(dn):
                    rem[i + j] -= q * c
        if any(rem):
            raise ValueError("not divisible (remainder)")
        return BigPoly._raw(_trim(out))

    def pseudo_rem(self, d: "BigPoly") -> "BigPoly":
        """prem(self, d) = lc(d)^(deg self - deg d + 1) * self  mod  d."""
        if d.is_zero:
            raise ZeroDivisionError("pseudo-remainder by zero polynomial")
        da, db = self.degree(), d.degree()
        if da < db:
            return self
        lb = d.leading
        rem = list(self.coeffs)
        steps = da - db + 1
        used = 0
        while rem and len(rem) - 1 >= db:
            lead = rem[-1]
            shift = len(rem) - 1 - db
            rem = [lb * c for c in rem]
            for j, c in enumerate(d.coeffs):
                rem[shift + j] -= lead * c
            rem = list(_trim(rem))
            used += 1
        if used < steps:
            f = lb ** (steps - used)
            rem = [f * c for c in rem]
        return BigPoly._raw(_trim(rem))

    def gcd(self, other: "BigPoly") -> "BigPoly":
        """Primitive gcd with positive leading coefficient, computed by the
        subresultant PRS on the primitive parts (or skipped when the
        evaluation shortcut certifies coprimality)."""
        a, b = self, other
        if a.is_zero:
            return b.primitive()
        if b.is_zero:
            return a.primitive()
        ca, cb = a.content(), b.content()
        cg = math.gcd(ca, cb)
        if a.degree() == 0 or b.degree() == 0:
            return BigPoly.const(cg)
        # evaluation shortcut: gcd(a(x0), b(x0)) is a multiple of g(x0);
        # if it is 1 the gcd has degree 0, hence equals gcd of contents
        for x0 in _SHORTCUT_POINTS:
            ia, ib = a.eval_int(x0), b.eval_int(x0)
            if math.gcd(ia, ib) == 1:
                return BigPoly.const(cg)
        A = a.primitive()
        B = b.primitive()
        if A.degree() < B.degree():
            A, B = B, A
        g, h = 1, 1
        while True:
            delta = A.degree() - B.degree()
            R = A.pseudo_rem(B)
            if R.is_zero:
                result = B.primitive()
                break
            if R.degree() == 0:
                result = BigPoly.const(1)
                break
            divisor = g * h ** delta
            A, B = B, BigPoly._raw(tuple(c // divisor for c in R.coeffs))
            g = A.leading
            if delta == 0:
                pass  # h unchanged
            elif delta == 1:
                h = g
            else:
                h = g ** delta // h ** (delta - 1)
        return result.scale(cg)
