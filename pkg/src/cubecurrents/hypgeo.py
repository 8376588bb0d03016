"""Geometry of the hyperbolic plane in the upper half-plane model.

Isometries are real 2x2 matrices of determinant one acting by Moebius
transformations.  Points of the plane are complex numbers with positive
imaginary part; points of the boundary circle are :class:`BoundaryPoint`
values, where infinity is its own variant rather than a sentinel float.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

from .errors import DegenerateAxis, NotHyperbolic, NotLinked, NotOnAxis

RENORM_TOL = 1e-12
SEPARATION_TOL = 1e-10
SHARED_ENDPOINT_TOL = 1e-9
ON_AXIS_TOL = 1e-7

X0 = 1j  # base point of the plane


@dataclass(frozen=True)
class Isometry:
    """Orientation-preserving isometry z -> (a z + b) / (c z + d)."""

    a: float
    b: float
    c: float
    d: float

    @classmethod
    def from_entries(cls, a: float, b: float, c: float, d: float) -> "Isometry":
        """Build an isometry, rescaling when the determinant has drifted."""
        det = a * d - b * c
        if det <= 0:
            raise ValueError(f"determinant must be positive, got {det!r}")
        if abs(det - 1.0) > RENORM_TOL:
            s = math.sqrt(det)
            a, b, c, d = a / s, b / s, c / s, d / s
        return cls(float(a), float(b), float(c), float(d))

    @classmethod
    def identity(cls) -> "Isometry":
        return cls(1.0, 0.0, 0.0, 1.0)

    def entries(self) -> tuple[float, float, float, float]:
        return (self.a, self.b, self.c, self.d)

    def __matmul__(self, other: "Isometry") -> "Isometry":
        return compose(self, other)

    def inverse(self) -> "Isometry":
        return Isometry(self.d, -self.b, -self.c, self.a)

    @property
    def trace(self) -> float:
        return self.a + self.d

    @property
    def det(self) -> float:
        return self.a * self.d - self.b * self.c

    def __call__(self, z: complex) -> complex:
        return (self.a * z + self.b) / (self.c * z + self.d)

    def act_boundary(self, x: "BoundaryPoint") -> "BoundaryPoint":
        p, q = x.homogeneous()
        return BoundaryPoint.from_homogeneous(self.a * p + self.b * q, self.c * p + self.d * q)


def compose(f: Isometry, g: Isometry) -> Isometry:
    """Return f o g.

    No renormalization: for long products the computed determinant cancels
    catastrophically and is far less accurate than the entries themselves.
    """
    return Isometry(
        f.a * g.a + f.b * g.c,
        f.a * g.b + f.b * g.d,
        f.c * g.a + f.d * g.c,
        f.c * g.b + f.d * g.d,
    )


@dataclass(frozen=True)
class BoundaryPoint:
    """A point of the real line or the point at infinity (``value is None``)."""

    value: float | None

    @classmethod
    def infinity(cls) -> "BoundaryPoint":
        return cls(None)

    @classmethod
    def finite(cls, x: float) -> "BoundaryPoint":
        if not math.isfinite(x):
            raise ValueError("use BoundaryPoint.infinity() for the point at infinity")
        return cls(float(x))

    @classmethod
    def from_homogeneous(cls, p: float, q: float) -> "BoundaryPoint":
        n = math.hypot(p, q)
        if n == 0.0:
            raise ValueError("zero homogeneous vector")
        if abs(q) <= 1e-300 or abs(q) / n < 1e-16:
            return cls(None)
        return cls(p / q)

    @property
    def is_infinite(self) -> bool:
        return self.value is None

    def homogeneous(self) -> tuple[float, float]:
        """Unit vector (p, q) with x = p / q; infinity is (1, 0)."""
        if self.value is None:
            return (1.0, 0.0)
        n = math.hypot(self.value, 1.0)
        return (self.value / n, 1.0 / n)

    def angle(self) -> float:
        """Position on the unit circle after the Cayley map, in [0, 2*pi)."""
        p, q = self.homogeneous()
        # x = tan(theta/2) up to orientation; infinity sits at angle pi
        th = 2.0 * math.atan2(p, q)
        return th % (2.0 * math.pi)

    def __repr__(self) -> str:
        return "BoundaryPoint(inf)" if self.value is None else f"BoundaryPoint({self.value!r})"


def chordal(x: BoundaryPoint, y: BoundaryPoint) -> float:
    """Chordal distance between boundary points on the unit circle (at most 2)."""
    xp, xq = x.homogeneous()
    yp, yq = y.homogeneous()
    return 2.0 * abs(xp * yq - xq * yp)


@dataclass(frozen=True)
class AxisPair:
    """Oriented geodesic from ``repelling`` to ``attracting``."""

    attracting: BoundaryPoint
    repelling: BoundaryPoint

    def __post_init__(self) -> None:
        if chordal(self.attracting, self.repelling) < SEPARATION_TOL:
            raise DegenerateAxis("axis endpoints coincide")

    def reversed(self) -> "AxisPair":
        return AxisPair(self.repelling, self.attracting)

    def moved(self, f: Isometry) -> "AxisPair":
        return AxisPair(f.act_boundary(self.attracting), f.act_boundary(self.repelling))


class LinkingState(Enum):
    LINKED = "linked"
    UNLINKED = "unlinked"
    SHARED_ENDPOINT = "shared_endpoint"


def translation_length(f: Isometry) -> float:
    t = abs(f.trace)
    return 2.0 * math.acosh(t / 2.0) if t > 2.0 else 0.0


def fixed_points(f: Isometry) -> AxisPair:
    """Attracting and repelling fixed points of a hyperbolic isometry."""
    t = f.trace
    disc = t * t - 4.0
    if disc <= 0.0:
        raise NotHyperbolic(f"trace {t!r} is not hyperbolic")
    root = math.sqrt(disc)
    # the dominant eigenvector of the matrix is the attracting fixed point
    lam_big = (t + math.copysign(root, t)) / 2.0
    lam_small = 1.0 / lam_big

    def eigvec(lam: float) -> BoundaryPoint:
        v1 = (f.b, lam - f.a)
        v2 = (lam - f.d, f.c)
        v = v1 if math.hypot(*v1) >= math.hypot(*v2) else v2
        return BoundaryPoint.from_homogeneous(*v)

    return AxisPair(eigvec(lam_big), eigvec(lam_small))


def _bracket(x: tuple[float, float], y: tuple[float, float]) -> float:
    return x[0] * y[1] - x[1] * y[0]


def link(p: AxisPair, q: AxisPair) -> LinkingState:
    """Decide whether two geodesics cross, share an endpoint, or are disjoint."""
    ends_p = (p.attracting.homogeneous(), p.repelling.homogeneous())
    ends_q = (q.attracting.homogeneous(), q.repelling.homogeneous())
    for x in ends_p:
        for y in ends_q:
            if 2.0 * abs(_bracket(x, y)) < SHARED_ENDPOINT_TOL:
                return LinkingState.SHARED_ENDPOINT
    a1, b1 = ends_p
    a2, b2 = ends_q
    # the pairs separate each other exactly when this cross-ratio product is negative
    s = _bracket(a1, a2) * _bracket(b1, b2) * _bracket(a1, b2) * _bracket(b1, a2)
    return LinkingState.LINKED if s < 0.0 else LinkingState.UNLINKED


def dist_h2(z: complex, w: complex) -> float:
    return 2.0 * math.asinh(abs(z - w) / (2.0 * math.sqrt(z.imag * w.imag)))


def axis_frame(axis: AxisPair, point: complex) -> Isometry:
    """Isometry sending the axis to the imaginary half-line.

    The repelling end goes to 0, the attracting end to infinity, and the foot
    of the perpendicular from ``point`` goes to i.
    """
    ap, aq = axis.attracting.homogeneous()
    rp, rq = axis.repelling.homogeneous()
    m = [rq, -rp, aq, -ap]
    det = m[0] * m[3] - m[1] * m[2]
    if det < 0:
        m[0], m[1] = -m[0], -m[1]
        det = -det
    s = math.sqrt(det)
    first = Isometry(m[0] / s, m[1] / s, m[2] / s, m[3] / s)
    r = abs(first(point))
    k = 1.0 / math.sqrt(r)
    return compose(Isometry(k, 0.0, 0.0, 1.0 / k), first)


def foot(axis: AxisPair, point: complex) -> complex:
    """Closest point of the geodesic to ``point``."""
    return axis_frame(axis, point).inverse()(1j)


def point_on_axis(frame: Isometry, t: float) -> complex:
    """Point at signed distance t from the anchor along a framed axis."""
    return frame.inverse()(1j * math.exp(t))


def crossing_param(base: AxisPair, anchor: complex, other: AxisPair) -> float:
    """Signed distance along ``base`` from ``anchor`` to where ``other`` crosses it."""
    if link(base, other) is not LinkingState.LINKED:
        raise NotLinked("geodesics do not cross")
    frame = axis_frame(base, anchor)
    w = frame(anchor)
    if abs(w - 1j) > ON_AXIS_TOL:
        raise NotOnAxis(f"anchor is {dist_h2(w, 1j)!r} away from the axis")
    u = frame.act_boundary(other.attracting)
    v = frame.act_boundary(other.repelling)
    # linked with the imaginary axis means both ends finite and of opposite sign
    return 0.5 * math.log(-(u.value * v.value))


def segment_distance(frame: Isometry, length: float, z: complex) -> float:
    """Distance from z to the framed segment between parameters 0 and ``length``."""
    w = frame(z)
    r = abs(w)
    t = math.log(r)
    if t < 0.0:
        return dist_h2(w, 1j)
    if t > length:
        return dist_h2(w, 1j * math.exp(length))
    return math.acosh(max(1.0, r / w.imag))


def geodesic_through(p: complex, q: complex) -> AxisPair:
    """Geodesic through two distinct points, oriented from p towards q."""
    if abs(p.real - q.real) < 1e-14 * (1.0 + abs(p.real)):
        x = BoundaryPoint.finite(p.real)
        inf = BoundaryPoint.infinity()
        return AxisPair(inf, x) if q.imag > p.imag else AxisPair(x, inf)
    # centre on the real line equidistant from p and q
    c = (abs(q) ** 2 - abs(p) ** 2) / (2.0 * (q.real - p.real))
    rad = abs(p - c)
    lo, hi = BoundaryPoint.finite(c - rad), BoundaryPoint.finite(c + rad)
    return AxisPair(hi, lo) if q.real > p.real else AxisPair(lo, hi)


def to_disk(z: complex) -> complex:
    return (z - 1j) / (z + 1j)


def from_disk(u: complex) -> complex:
    return 1j * (1 + u) / (1 - u)


def angle_at(p: complex, q: complex, r: complex) -> float:
    """Interior angle at p of the geodesic triangle p, q, r."""
    # recentre at p in the disk model, where geodesics through the centre are straight
    def recentred(z: complex) -> complex:
        w = (z - p.real) / p.imag
        return to_disk(w)

    a = cmath.phase(recentred(q))
    b = cmath.phase(recentred(r))
    d = abs(a - b) % (2.0 * math.pi)
    return min(d, 2.0 * math.pi - d)


def polygon_area(vertices: list[complex]) -> float:
    """Area of a convex geodesic polygon from its angle defect."""
    n = len(vertices)
    total = 0.0
    for k in range(n):
        total += angle_at(vertices[k], vertices[k - 1], vertices[(k + 1) % n])
    return (n - 2) * math.pi - total
