"""Built-in example equations used by tests, docs and the CLI docs.

The exp family log(A*e^u00 + B*e^u10 + C*e^u01 + k) linearizes through
w = e^u; the harmonic equation through w = 1/u; the last two are known
negative controls that fail the ratio conditions.
"""

from __future__ import annotations

from .linearize import QuadEquation

__all__ = ["exp_family", "harmonic", "linear", "product_negative",
           "multiplicative_negative", "CATALOG"]


def exp_family(alpha: float = 1.0, beta: float = 1.0, gamma: float = 1.0,
               k: float = 0.0) -> QuadEquation:
    params = {"a": alpha, "b": beta, "g": gamma, "k": k}
    return QuadEquation("log(a*exp(u00) + b*exp(u10) + g*exp(u01) + k)",
                        params=params, name=f"exp[{alpha},{beta},{gamma},{k}]")


def harmonic() -> QuadEquation:
    return QuadEquation("1/(1/u00 + 1/u10 + 1/u01)", name="harmonic")


def linear() -> QuadEquation:
    return QuadEquation("u00 + u10 + u01", name="linear")


def product_negative() -> QuadEquation:
    """Fails condition 2 (and 5): F_u00/F_u01 depends on u10."""
    return QuadEquation("u00*u10 + u01", name="product")


def multiplicative_negative() -> QuadEquation:
    """Fails condition 1 (and 4): F_u00/F_u10 depends on u01."""
    return QuadEquation("u00 + u10*u01", name="multiplicative")


CATALOG = {
    "linear": linear,
    "harmonic": harmonic,
    "exp111": lambda: exp_family(1.0, 1.0, 1.0, 0.0),
    "exp213": lambda: exp_family(2.0, 1.0, 3.0, 0.0),
    "product": product_negative,
    "multiplicative": multiplicative_negative,
}
