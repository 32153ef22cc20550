"""Exception hierarchy shared by all quadlin modules.

Every failure mode raises a typed exception; no operation ever returns NaN
or silently degrades.  The CLI maps these onto process exit codes.
"""


class QuadlinError(Exception):
    """Base class for all quadlin errors."""


class ParseError(QuadlinError):
    """Malformed equation text.  Carries the character position and the
    token class the parser expected there."""

    def __init__(self, position: int, expected: str, found: str = ""):
        self.position = position
        self.expected = expected
        self.found = found
        what = f"expected {expected} at index {position}"
        if found:
            what += f", found {found!r}"
        super().__init__(what)


class UnknownIdentifier(QuadlinError):
    """Identifier is neither a site variable, a function, nor a bound
    parameter."""

    def __init__(self, name: str, position: int = -1):
        self.name = name
        self.position = position
        super().__init__(f"unknown identifier {name!r}")


class UnboundParam(QuadlinError):
    """A Param node was evaluated without a binding for its name."""

    def __init__(self, name: str):
        self.name = name
        super().__init__(f"unbound parameter {name!r}")


class DomainError(QuadlinError):
    """Evaluation left the expression's domain (log of a non-positive
    value, division by ~zero, fractional power of a negative base,
    overflow).  Raised eagerly so NaN never propagates."""

    def __init__(self, node: str, point=None, cell=None):
        self.node = node
        self.point = point
        self.cell = cell
        msg = f"domain violation at {node} node"
        if point is not None:
            msg += f" for point {point}"
        if cell is not None:
            msg += f" at grid cell {cell}"
        super().__init__(msg)


class DimensionError(QuadlinError):
    """Grid dimensions out of range."""


class ConflictError(QuadlinError):
    """Staircase row/column disagree at the shared corner."""


class DegenerateDerivative(QuadlinError):
    """A partial derivative of F vanishes on too large a fraction of the
    sample set for ratio conditions to be meaningful."""


class SignChange(QuadlinError):
    """Recovered scaling function changes sign on the table, so no
    monotone transformation exists on that interval."""


class QuadratureFailure(QuadlinError):
    """Adaptive quadrature could not reach the requested tolerance within
    its subdivision budget."""


class RankDeficient(QuadlinError):
    """Least-squares design matrix is numerically singular."""


class CertificationFailure(QuadlinError):
    """A transform build step was invoked on a model or report that did
    not certify."""


class ZeroDivisionCell(QuadlinError):
    """A grid ratio or multiplicative potential hit a ~zero denominator.
    Carries the offending cell index."""

    def __init__(self, cell, what: str = "denominator"):
        self.cell = cell
        super().__init__(f"{what} vanishes at grid cell {cell}")


class PoleError(QuadlinError):
    """A Moebius transformation was evaluated at (or too close to) one of
    its poles."""

    def __init__(self, cell, value: float):
        self.cell = cell
        self.value = value
        super().__init__(f"value {value} at cell {cell} is too close to a pole")


class DegenerateParams(QuadlinError):
    """Parameter choice collapses a transformation (coincident shifts)."""


class DivisionByZeroFunction(QuadlinError):
    """Division by the zero rational function."""


class NonRationalEquation(QuadlinError):
    """Exact degree tracking requires a rational right-hand side."""


class DegenerateTrajectory(QuadlinError):
    """All retries of the exact iteration hit degenerate cancellation."""


class TooShort(QuadlinError):
    """Degree sequence too short to classify."""


class UnsupportedFormat(QuadlinError):
    """Requested report format does not exist for this result type."""
