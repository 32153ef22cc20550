"""Equation DSL: tokenizer, recursive-descent parser, printer, evaluators.

Grammar (ASCII input):

    expr    := term (('+'|'-') term)*
    term    := factor (('*'|'/') factor)*
    factor  := atom ('^' signed-rational)?
    atom    := number | site-id | param-name
             | function '(' expr ')' | '(' expr ')' | '-' atom
    signed-rational := ['-'] integer | '(' ['-'] integer ['/' integer] ')'

Functions: exp, log.  Numbers are integer or decimal literals, kept as
exact rationals in the AST and widened per evaluation backend (float,
dual, or exact rational function).  Exponents are restricted to rational
constants so derivative rules stay closed-form and rationality of an
expression is decidable by a syntactic scan.

Right-hand sides of quad equations use the sites {u00, u10, u01};
four-point relations additionally use u11 (opt in via ``sites=``).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Union

from .dual import DualValue
from .errors import DomainError, ParseError, UnboundParam, UnknownIdentifier

RHS_SITES = ("u00", "u10", "u01")
RELATION_SITES = ("u00", "u10", "u01", "u11")
FUNCTIONS = ("exp", "log")

# Overflow guard for exp(): math.exp raises OverflowError above ~709.78
# but we cut earlier so downstream products cannot reach inf.
_EXP_MAX = 700.0


# ---------------------------------------------------------------------------
# AST nodes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Var:
    site: str


@dataclass(frozen=True)
class Const:
    value: Fraction


@dataclass(frozen=True)
class Param:
    name: str


@dataclass(frozen=True)
class Add:
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Sub:
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Mul:
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Div:
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Neg:
    operand: "Node"


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exponent: Fraction


@dataclass(frozen=True)
class Exp:
    operand: "Node"


@dataclass(frozen=True)
class Log:
    operand: "Node"


Node = Union[Var, Const, Param, Add, Sub, Mul, Div, Neg, Pow, Exp, Log]

_BINARY = (Add, Sub, Mul, Div)


class Expression:
    """Immutable parsed expression over lattice-site variables."""

    __slots__ = ("root", "_sites")

    def __init__(self, root: Node):
        object.__setattr__(self, "root", root)
        object.__setattr__(self, "_sites", frozenset(_collect_sites(root)))

    def __setattr__(self, *a):  # pragma: no cover - guard only
        raise AttributeError("Expression is immutable")

    @property
    def sites(self) -> frozenset:
        return self._sites

    def __eq__(self, other):
        return isinstance(other, Expression) and self.root == other.root

    def __hash__(self):
        return hash(self.root)

    def __repr__(self):
        return f"Expression({to_text(self.root)!r})"


def _collect_sites(node: Node, acc=None):
    if acc is None:
        acc = set()
    if isinstance(node, Var):
        acc.add(node.site)
    elif isinstance(node, _BINARY):
        _collect_sites(node.left, acc)
        _collect_sites(node.right, acc)
    elif isinstance(node, (Neg, Exp, Log)):
        _collect_sites(node.operand, acc)
    elif isinstance(node, Pow):
        _collect_sites(node.base, acc)
    return acc


# ---------------------------------------------------------------------------
# Tokenizer / parser
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d+)?)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^()]))"
)


def _tokenize(text: str):
    tokens = []  # (kind, value, position)
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            bad_at = len(text) - len(stripped)
            raise ParseError(bad_at, "number, identifier or operator", text[bad_at])
        if m.group("num") is not None:
            tokens.append(("num", m.group("num"), m.start("num")))
        elif m.group("ident") is not None:
            tokens.append(("ident", m.group("ident"), m.start("ident")))
        else:
            tokens.append(("op", m.group("op"), m.start("op")))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, params: Mapping[str, float], sites):
        self.text = text
        self.params = params
        self.sites = sites
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op: str):
        kind, val, pos = self.peek()
        if kind != "op" or val != op:
            raise ParseError(pos, f"'{op}'", val or "end of input")
        return self.advance()

    def parse(self) -> Node:
        node = self.expr()
        kind, val, pos = self.peek()
        if kind != "eof":
            raise ParseError(pos, "end of input", val)
        return node

    def expr(self) -> Node:
        node = self.term()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.advance()
                rhs = self.term()
                node = Add(node, rhs) if val == "+" else Sub(node, rhs)
            else:
                return node

    def term(self) -> Node:
        node = self.factor()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "*/":
                self.advance()
                rhs = self.factor()
                node = Mul(node, rhs) if val == "*" else Div(node, rhs)
            else:
                return node

    def factor(self) -> Node:
        node = self.atom()
        kind, val, _ = self.peek()
        if kind == "op" and val == "^":
            self.advance()
            exponent = self.signed_rational()
            node = Pow(node, exponent)
        return node

    def signed_rational(self) -> Fraction:
        sign = 1
        kind, val, pos = self.peek()
        if kind == "op" and val == "-":
            self.advance()
            sign = -1
            kind, val, pos = self.peek()
        if kind == "num":
            self.advance()
            if "." in val:
                raise ParseError(pos, "integer exponent", val)
            return Fraction(sign * int(val))
        if kind == "op" and val == "(":
            self.advance()
            kind, val, pos = self.peek()
            inner_sign = sign
            if kind == "op" and val == "-":
                self.advance()
                inner_sign = -sign
                kind, val, pos = self.peek()
            if kind != "num" or "." in val:
                raise ParseError(pos, "integer", val or "end of input")
            num = int(val)
            self.advance()
            den = 1
            kind, val, pos = self.peek()
            if kind == "op" and val == "/":
                self.advance()
                kind, val, pos = self.peek()
                if kind != "num" or "." in val:
                    raise ParseError(pos, "integer", val or "end of input")
                den = int(val)
                self.advance()
            self.expect_op(")")
            return Fraction(inner_sign * num, den)
        raise ParseError(pos, "rational exponent", val or "end of input")

    def atom(self) -> Node:
        kind, val, pos = self.peek()
        if kind == "num":
            self.advance()
            return Const(Fraction(val))
        if kind == "ident":
            self.advance()
            if val in self.sites:
                return Var(val)
            if val in FUNCTIONS:
                self.expect_op("(")
                inner = self.expr()
                self.expect_op(")")
                return Exp(inner) if val == "exp" else Log(inner)
            if val in self.params:
                return Const(Fraction(str(self.params[val])))
            raise UnknownIdentifier(val, pos)
        if kind == "op" and val == "(":
            self.advance()
            inner = self.expr()
            self.expect_op(")")
            return inner
        if kind == "op" and val == "-":
            self.advance()
            inner = self.atom()
            # fold unary minus into numeric literals so printing round-trips
            if isinstance(inner, Const):
                return Const(-inner.value)
            return Neg(inner)
        raise ParseError(pos, "number, identifier or '('", val or "end of input")


def parse(text: str, params: Mapping[str, float] | None = None, *, sites=RHS_SITES) -> Expression:
    """Parse equation text into an Expression.

    ``params`` values are substituted as exact-rational constants (floats
    go through their shortest decimal representation).  Identifiers that
    are neither sites, functions, nor bound params are rejected.
    """
    root = _Parser(text, params or {}, sites).parse()
    return Expression(root)


# ---------------------------------------------------------------------------
# Printer (fully parenthesized; parse(to_text(e)) == e structurally)
# ---------------------------------------------------------------------------

def _fraction_literal(f: Fraction) -> str:
    """Exact decimal string for fractions whose denominator is 2^a*5^b;
    such values are precisely the ones the parser can produce."""
    if f < 0:
        return "-" + _fraction_literal(-f)
    den = f.denominator
    k = 0
    while den % 2 == 0:
        den //= 2
        k += 1
    j = 0
    while den % 5 == 0:
        den //= 5
        j += 1
    if den != 1:
        raise ValueError(f"{f} has no finite decimal representation")
    shift = max(k, j)
    scaled = f.numerator * 10 ** shift // f.denominator
    s = str(scaled)
    if shift == 0:
        return s
    s = s.rjust(shift + 1, "0")
    return s[:-shift] + "." + s[-shift:]


def _exponent_text(e: Fraction) -> str:
    if e.denominator == 1:
        return str(e.numerator) if e >= 0 else f"(-{-e.numerator})"
    if e >= 0:
        return f"({e.numerator}/{e.denominator})"
    return f"(-{-e.numerator}/{e.denominator})"


def to_text(node: Node) -> str:
    if isinstance(node, Var):
        return node.site
    if isinstance(node, Const):
        return _fraction_literal(node.value)
    if isinstance(node, Param):
        return node.name
    if isinstance(node, Add):
        return f"({to_text(node.left)} + {to_text(node.right)})"
    if isinstance(node, Sub):
        return f"({to_text(node.left)} - {to_text(node.right)})"
    if isinstance(node, Mul):
        return f"({to_text(node.left)} * {to_text(node.right)})"
    if isinstance(node, Div):
        return f"({to_text(node.left)} / {to_text(node.right)})"
    if isinstance(node, Neg):
        return f"(-{to_text(node.operand)})"
    if isinstance(node, Pow):
        return f"({to_text(node.base)} ^ {_exponent_text(node.exponent)})"
    if isinstance(node, Exp):
        return f"exp({to_text(node.operand)})"
    if isinstance(node, Log):
        return f"log({to_text(node.operand)})"
    raise TypeError(f"unknown node {node!r}")


def print_expression(e: Expression) -> str:
    return to_text(e.root)


# ---------------------------------------------------------------------------
# Float evaluation
# ---------------------------------------------------------------------------

def evaluate(e: Expression, env: Mapping[str, float], *, div_guard: float = 0.0,
             params: Mapping[str, float] | None = None) -> float:
    """Evaluate over plain floats.  Raises DomainError instead of producing
    NaN or infinity; ``div_guard`` widens the division-by-zero band."""
    def ev(node: Node) -> float:
        if isinstance(node, Var):
            return env[node.site]
        if isinstance(node, Const):
            return float(node.value)
        if isinstance(node, Param):
            if params and node.name in params:
                return float(params[node.name])
            raise UnboundParam(node.name)
        if isinstance(node, Add):
            return _finite(ev(node.left) + ev(node.right), "Add", env)
        if isinstance(node, Sub):
            return _finite(ev(node.left) - ev(node.right), "Sub", env)
        if isinstance(node, Mul):
            return _finite(ev(node.left) * ev(node.right), "Mul", env)
        if isinstance(node, Div):
            den = ev(node.right)
            if abs(den) <= div_guard or den == 0.0:
                raise DomainError("Div", dict(env))
            return _finite(ev(node.left) / den, "Div", env)
        if isinstance(node, Neg):
            return -ev(node.operand)
        if isinstance(node, Pow):
            return _pow_float(ev(node.base), node.exponent, env)
        if isinstance(node, Exp):
            x = ev(node.operand)
            if x > _EXP_MAX:
                raise DomainError("Exp", dict(env))
            return math.exp(x)
        if isinstance(node, Log):
            x = ev(node.operand)
            if x <= 0.0:
                raise DomainError("Log", dict(env))
            return math.log(x)
        raise TypeError(f"unknown node {node!r}")

    return ev(e.root)


def _finite(x: float, node: str, env) -> float:
    if not math.isfinite(x):
        raise DomainError(node, dict(env))
    return x


def _pow_float(x: float, e: Fraction, env) -> float:
    if e.denominator == 1:
        n = e.numerator
        if n < 0 and x == 0.0:
            raise DomainError("Pow", dict(env))
        try:
            v = x ** n if n >= 0 else 1.0 / (x ** (-n))
        except OverflowError:
            raise DomainError("Pow", dict(env)) from None
        return _finite(v, "Pow", env)
    if x <= 0.0:
        raise DomainError("Pow", dict(env))
    return _finite(math.pow(x, float(e)), "Pow", env)


# ---------------------------------------------------------------------------
# Dual evaluation (value + three partials)
# ---------------------------------------------------------------------------

def eval_with_partials(e: Expression, point, *, div_guard: float = 0.0) -> DualValue:
    """Evaluate with first-order forward-mode derivatives with respect to
    (u00, u10, u01) seeded as unit vectors at ``point``."""
    extra = e.sites - set(RHS_SITES)
    if extra:
        raise ValueError(f"derivative seeding is defined for {RHS_SITES}; "
                         f"expression also uses {sorted(extra)}")
    seeds = {
        "u00": DualValue.seeded(point[0], 0),
        "u10": DualValue.seeded(point[1], 1),
        "u01": DualValue.seeded(point[2], 2),
    }

    def ev(node: Node) -> DualValue:
        if isinstance(node, Var):
            return seeds[node.site]
        if isinstance(node, Const):
            return DualValue.constant(float(node.value))
        if isinstance(node, Param):
            raise UnboundParam(node.name)
        if isinstance(node, Add):
            return _finite_dual(ev(node.left) + ev(node.right), "Add", point)
        if isinstance(node, Sub):
            return _finite_dual(ev(node.left) - ev(node.right), "Sub", point)
        if isinstance(node, Mul):
            return _finite_dual(ev(node.left) * ev(node.right), "Mul", point)
        if isinstance(node, Div):
            den = ev(node.right)
            if abs(den.value) <= div_guard or den.value == 0.0:
                raise DomainError("Div", tuple(point))
            return _finite_dual(ev(node.left) / den, "Div", point)
        if isinstance(node, Neg):
            return -ev(node.operand)
        if isinstance(node, Pow):
            base = ev(node.base)
            ex = node.exponent
            if ex.denominator == 1:
                if ex.numerator < 0 and base.value == 0.0:
                    raise DomainError("Pow", tuple(point))
            elif base.value <= 0.0:
                raise DomainError("Pow", tuple(point))
            try:
                return _finite_dual(base.pow_rational(ex), "Pow", point)
            except OverflowError:
                raise DomainError("Pow", tuple(point)) from None
        if isinstance(node, Exp):
            v = ev(node.operand)
            if v.value > _EXP_MAX:
                raise DomainError("Exp", tuple(point))
            return _finite_dual(v.exp(), "Exp", point)
        if isinstance(node, Log):
            v = ev(node.operand)
            if v.value <= 0.0:
                raise DomainError("Log", tuple(point))
            return _finite_dual(v.log(), "Log", point)
        raise TypeError(f"unknown node {node!r}")

    return ev(e.root)


def _finite_dual(d: DualValue, node: str, point) -> DualValue:
    if not (math.isfinite(d.value) and math.isfinite(d.d0)
            and math.isfinite(d.d1) and math.isfinite(d.d2)):
        raise DomainError(node, tuple(point))
    return d


# ---------------------------------------------------------------------------
# Rationality scan
# ---------------------------------------------------------------------------

def is_rational(e: Expression) -> bool:
    """Purely syntactic: no Exp/Log nodes and all Pow exponents integral.
    No simplification is attempted (log(exp(x)) counts as non-rational)."""
    def scan(node: Node) -> bool:
        if isinstance(node, (Var, Const, Param)):
            return True
        if isinstance(node, _BINARY):
            return scan(node.left) and scan(node.right)
        if isinstance(node, Neg):
            return scan(node.operand)
        if isinstance(node, Pow):
            return node.exponent.denominator == 1 and scan(node.base)
        return False  # Exp / Log

    return scan(e.root)


def count_interior_nodes(e: Expression) -> int:
    """Number of non-leaf nodes strictly between the root and the leaves."""
    def count(node: Node) -> int:
        if isinstance(node, (Var, Const, Param)):
            return 0
        if isinstance(node, _BINARY):
            return 1 + count(node.left) + count(node.right)
        if isinstance(node, Pow):
            return 1 + count(node.base)
        return 1 + count(node.operand)

    total = count(e.root)
    return total - 1 if total else 0
