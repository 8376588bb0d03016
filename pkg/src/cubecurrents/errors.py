"""Exception types shared across the package."""

from __future__ import annotations


class CubeCurrentsError(Exception):
    """Base class for domain errors raised by this package."""


class NotHyperbolic(CubeCurrentsError):
    """An element expected to be hyperbolic has |trace| <= 2."""


class DegenerateAxis(CubeCurrentsError):
    """Axis endpoints closer than the separation tolerance."""


class NotLinked(CubeCurrentsError):
    """A crossing parameter was requested for unlinked geodesics."""


class NotOnAxis(CubeCurrentsError):
    """An anchor point is not on the geodesic it should lie on."""


class RelatorCheckFailed(CubeCurrentsError):
    """Generator images do not satisfy the surface relator."""


class ParseError(CubeCurrentsError):
    """Malformed word, current or matrix input."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" (line {line}, column {column})"
        super().__init__(message + where)


class IdentityClass(CubeCurrentsError):
    """The identity has no closed geodesic."""


class NonPrimitiveWeight(CubeCurrentsError):
    """Atoms of a current must have positive weight."""


class NotStabilized(CubeCurrentsError):
    """Radius doubling did not stabilize within the allowed number of steps."""


class AmbiguousAxes(CubeCurrentsError):
    """Two candidate axes are neither clearly equal nor clearly distinct."""


class InconsistentWalls(CubeCurrentsError):
    """Walls could not be oriented consistently."""


class NotDiscrete(CubeCurrentsError):
    """Distinct atoms produced coincident walls."""


class BudgetExceeded(CubeCurrentsError):
    """An enumeration exceeded its configured size budget."""


class NotFilling(CubeCurrentsError):
    """A current failed its filling certificate."""
