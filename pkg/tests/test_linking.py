import pytest

from cubecurrents import kernels
from cubecurrents.fuchsian import standard_rep
from cubecurrents.linking import (SearchOptions, class_geometry, crossings_at, geometrically_conjugate,
                                  region, same_axis, stable_crossings, steps)
from cubecurrents.words import inverse, parse_word
from tests.oracles import crossing_count

REP = standard_rep(2)
G = 2


def w(text):
    return parse_word(text, G)


SAMPLE = [("a1", "b1", 1), ("a1", "a1", 0), ("a1", "a2", 0), ("a1 b1", "a1 B1", 2), ("a1", "a1 B1 B1", 2),
          ("b1", "a1 a1 b1", 2), ("a1 b2", "b1 a2", 2), ("a1 a2", "b1 b2", 2)]


@pytest.mark.parametrize("h,c,expected", SAMPLE)
def test_counts_match_ball_oracle(h, c, expected):
    res = stable_crossings(REP, w(h), w(c))
    assert res.stabilized
    assert len(res.crossings) == expected
    assert crossing_count(REP, w(h), w(c), 5) == expected


def test_homology_lower_bound():
    # algebraic intersection of a1 with a1 b1^-2 is 2, so at least two crossings
    assert len(stable_crossings(REP, w("a1"), w("a1 B1 B1")).crossings) >= 2


def test_crossings_are_in_window_and_sorted():
    c = w("a1 b2 A2")
    res = stable_crossings(REP, w("b1 a2"), c)
    ell = class_geometry(REP, c).length
    params = [x.param for x in res.crossings]
    assert params == sorted(params)
    assert all(-1e-9 <= t < ell for t in params)


def test_periods_scale_counts():
    one = stable_crossings(REP, w("a1 b2"), w("b1 a2"), 1)
    three = stable_crossings(REP, w("a1 b2"), w("b1 a2"), 3)
    assert len(three.crossings) == 3 * len(one.crossings)


def test_margin_growth_is_monotone():
    h, c = w("a1 b2"), w("a1 b1 a2")
    small = crossings_at(REP, h, c, 1, 0.5)
    big = crossings_at(REP, h, c, 1, 2.0)
    assert len(small) <= len(big)
    assert len(big) == len(stable_crossings(REP, h, c).crossings)


def test_same_axis_word_problem():
    h = w("a1 b2")
    assert same_axis(REP, h, w("b1"), w("b1") + h * 2)
    assert same_axis(REP, h, w("b1"), w("b1") + inverse(h))
    assert not same_axis(REP, h, w("b1"), w("a2"))


def test_steps_connect_the_ball():
    st = steps(REP)
    assert len(st.words) > 0
    from cubecurrents.hypgeo import X0, dist_h2
    for m in st.mats:
        z = (m[0, 0] * 1j + m[0, 1]) / (m[1, 0] * 1j + m[1, 1])
        assert dist_h2(z, X0) <= 2 * REP.covering_radius + 0.25 + 1e-9


def test_region_contains_identity_and_grows():
    c = w("a1 b1")
    r1 = region(REP, c, 0.0, 1.0, REP.covering_radius + 0.5, 10 ** 6)
    r2 = region(REP, c, 0.0, 1.0, REP.covering_radius + 1.0, 10 ** 6)
    assert () in r1.words
    assert set(r1.words) <= set(r2.words)


def test_geometric_conjugacy():
    assert geometrically_conjugate(REP, w("a1 b1"), w("b1 a1"))
    assert geometrically_conjugate(REP, w("a1 b1"), w("B1 A1"))
    assert not geometrically_conjugate(REP, w("a1 b1"), w("a1 B1"))


@pytest.mark.skipif("compiled" not in kernels.available_backends(), reason="extension not built")
def test_backends_agree_on_counts():
    pairs = [("a1 b2", "b1 a2"), ("a1", "a1 B1 B1"), ("a1 a2", "b1 b2 A1")]
    before = kernels.backend()
    try:
        results = {}
        for name in ("python", "compiled"):
            kernels.use_backend(name)
            results[name] = [tuple((round(x.param, 12), x.conjugator) for x in
                                   crossings_at(REP, w(h), w(c), 1, 1.0)) for h, c in pairs]
        assert results["python"] == results["compiled"]
    finally:
        kernels.use_backend(before)


def test_budget_exceeded():
    from cubecurrents.errors import BudgetExceeded
    with pytest.raises(BudgetExceeded):
        stable_crossings(REP, w("a1"), w("b1"), 1, SearchOptions(max_tiles=3))
