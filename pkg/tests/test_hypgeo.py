import math

import pytest
from hypothesis import given, settings, strategies as st

from cubecurrents.errors import DegenerateAxis, NotHyperbolic, NotLinked, NotOnAxis
from cubecurrents.hypgeo import (AxisPair, BoundaryPoint, Isometry, LinkingState, X0, axis_frame, chordal,
                                 compose, crossing_param, dist_h2, fixed_points, foot, geodesic_through,
                                 link, point_on_axis, polygon_area, segment_distance, translation_length)

E = math.e
fin = BoundaryPoint.finite
INF = BoundaryPoint.infinity()


def close(f: Isometry, g: Isometry, tol: float = 1e-9) -> bool:
    # projective equality: g may equal -f
    d1 = max(abs(x - y) for x, y in zip(f.entries(), g.entries()))
    d2 = max(abs(x + y) for x, y in zip(f.entries(), g.entries()))
    return min(d1, d2) < tol


A = Isometry.from_entries(2.0, 1.0, 1.0, 1.0)


def test_compose_identity():
    assert close(compose(Isometry.identity(), A), A)


def test_compose_inverse():
    assert close(A @ A.inverse(), Isometry.identity())


def test_from_entries_renormalizes_and_rejects():
    m = Isometry.from_entries(2.0, 0.0, 0.0, 2.0)
    assert m.det == pytest.approx(1.0, abs=1e-15)
    with pytest.raises(ValueError):
        Isometry.from_entries(0.0, 1.0, 1.0, 0.0)


def test_translation_length_examples():
    assert translation_length(Isometry.identity()) == 0.0
    assert translation_length(Isometry(E, 0.0, 0.0, 1 / E)) == pytest.approx(2.0, abs=1e-12)


def test_fixed_points_diagonal():
    ax = fixed_points(Isometry(E, 0.0, 0.0, 1 / E))
    assert ax.attracting.is_infinite
    assert ax.repelling.value == pytest.approx(0.0, abs=1e-15)


def test_fixed_points_golden():
    ax = fixed_points(A)
    phi = (1 + math.sqrt(5)) / 2
    assert ax.attracting.value == pytest.approx(phi, abs=1e-12)
    assert ax.repelling.value == pytest.approx(1 - phi, abs=1e-12)
    for x in (ax.attracting, ax.repelling):
        assert chordal(A.act_boundary(x), x) < 1e-12


def test_fixed_points_rejects_elliptic():
    with pytest.raises(NotHyperbolic):
        fixed_points(Isometry(0.0, -1.0, 1.0, 0.0))


def test_link_examples():
    base = AxisPair(INF, fin(0.0))
    assert link(base, AxisPair(fin(-1.0), fin(1.0))) is LinkingState.LINKED
    assert link(base, AxisPair(fin(1.0), fin(2.0))) is LinkingState.UNLINKED
    assert link(base, AxisPair(fin(0.0), fin(5.0))) is LinkingState.SHARED_ENDPOINT


def test_degenerate_axis():
    with pytest.raises(DegenerateAxis):
        AxisPair(fin(1.0), fin(1.0))


def test_dist_examples():
    assert dist_h2(1j, 1j) == 0.0
    assert dist_h2(1j, E * 1j) == pytest.approx(1.0, abs=1e-14)
    assert dist_h2(1j, 1 + 1j) == pytest.approx(math.acosh(1.5), abs=1e-14)
    assert dist_h2(1j, 1 + 1j) == pytest.approx(0.9624236501192069, abs=1e-14)


def test_crossing_param_examples():
    base = AxisPair(INF, fin(0.0))
    assert crossing_param(base, 1j, AxisPair(fin(-1.0), fin(1.0))) == pytest.approx(0.0, abs=1e-14)
    assert crossing_param(base, 1j, AxisPair(fin(-E ** 2), fin(E ** 2))) == pytest.approx(2.0, abs=1e-13)


def test_crossing_param_errors():
    base = AxisPair(INF, fin(0.0))
    with pytest.raises(NotLinked):
        crossing_param(base, 1j, AxisPair(fin(1.0), fin(2.0)))
    with pytest.raises(NotOnAxis):
        crossing_param(base, 1 + 1j, AxisPair(fin(-1.0), fin(1.0)))


def test_axis_frame_normalization():
    ax = AxisPair(fin(3.0), fin(-0.5))
    f = axis_frame(ax, 2 + 5j)
    assert chordal(f.act_boundary(ax.attracting), INF) < 1e-12
    assert chordal(f.act_boundary(ax.repelling), fin(0.0)) < 1e-12
    assert abs(f(foot(ax, 2 + 5j)) - 1j) < 1e-12
    # the foot is the closest point of the axis
    d0 = dist_h2(2 + 5j, foot(ax, 2 + 5j))
    for t in (-0.3, 0.2, 1.0):
        assert dist_h2(2 + 5j, point_on_axis(f, t)) >= d0 - 1e-12


def test_segment_distance_cases():
    f = Isometry.identity()
    assert segment_distance(f, 2.0, 1j) == 0.0
    assert segment_distance(f, 2.0, 3j) == pytest.approx(0.0, abs=1e-14)
    assert segment_distance(f, 2.0, 0.5j) == pytest.approx(math.log(2.0), abs=1e-14)
    assert segment_distance(f, 1.0, 1j * E ** 3) == pytest.approx(2.0, abs=1e-12)


def test_geodesic_through_contains_points():
    p, q = 0.3 + 1.0j, -2.0 + 0.5j
    ax = geodesic_through(p, q)
    f = axis_frame(ax, p)
    assert abs(f(p) - 1j) < 1e-12
    w = f(q)
    assert abs(w.real) < 1e-12 and w.imag > 1.0   # q lies further along the orientation


def test_polygon_area_right_angled_pentagon():
    # a right-angled regular pentagon has area pi/2
    big_r = math.acosh(1.0 / math.tan(math.pi / 5))
    r = math.tanh(big_r / 2)
    from cubecurrents.hypgeo import from_disk
    verts = [from_disk(r * complex(math.cos(2 * math.pi * k / 5), math.sin(2 * math.pi * k / 5)))
             for k in range(5)]
    assert polygon_area(verts) == pytest.approx(math.pi / 2, abs=1e-9)


entries = st.floats(min_value=-3.0, max_value=3.0, allow_nan=False)


@st.composite
def isometries(draw):
    a, b, c = draw(entries), draw(entries), draw(entries)
    a = a if abs(a) > 0.2 else 0.2 + abs(a)
    return Isometry(a, b, c, (1 + b * c) / a)


@settings(max_examples=60, deadline=None)
@given(isometries(), isometries())
def test_distance_is_invariant(f, g):
    z, w = f(X0), g(2 + 0.5j)
    assert dist_h2(z, w) == pytest.approx(dist_h2(A(z), A(w)), rel=1e-7, abs=1e-9)


@settings(max_examples=60, deadline=None)
@given(isometries())
def test_fixed_points_are_fixed(f):
    if abs(f.trace) < 2.05:
        return
    ax = fixed_points(f)
    for x in (ax.attracting, ax.repelling):
        assert chordal(f.act_boundary(x), x) < 1e-8
    # attracting end pulls a generic boundary point towards itself
    y = fin(0.123456)
    for _ in range(30):
        y = f.act_boundary(y)
    assert chordal(y, ax.attracting) < chordal(y, ax.repelling) or chordal(y, ax.attracting) < 1e-6
