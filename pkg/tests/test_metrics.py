import math
from fractions import Fraction

import pytest

from cubecurrents.currents import WeightedCurrent
from cubecurrents.fuchsian import standard_rep
from cubecurrents.metrics import (LengthSpectrum, SpectrumMismatch, approximation_experiment, cubical_spectrum,
                                  delta_estimate, hyperbolic_spectrum, nondiscreteness_check)
from cubecurrents.words import ConjugacyClass, enumerate_classes

REP = standard_rep(2)
G = 2


def cc(text):
    return ConjugacyClass.parse(text, G)


def eta(*words):
    return WeightedCurrent.from_items(G, [(w, 1) for w in words])


def test_hyperbolic_spectrum_at_length_one():
    s = hyperbolic_spectrum(REP, 1)
    assert len(s.entries) == 4
    ell = 2 * math.acosh(1 / math.tan(math.pi / 8))
    for _, v in s.entries:
        assert v == pytest.approx(ell, abs=1e-9)
    assert ell == pytest.approx(3.05714, abs=1e-5)


def test_cubical_spectrum_of_a_simple_curve():
    s = cubical_spectrum(eta("a1"), REP, 1)
    assert {str(c): v for c, v in s.entries} == {"a1": 0, "a2": 0, "b1": 1, "b2": 0}


def test_cubical_entries_are_half_integers():
    s = cubical_spectrum(eta("a1 b2", "a2"), REP, 2)
    assert all((2 * Fraction(v)).denominator == 1 for _, v in s.entries)


def test_delta_identity_and_scale():
    s = hyperbolic_spectrum(REP, 2)
    assert delta_estimate(s, s).exp_delta == pytest.approx(1.0, abs=1e-12)
    assert delta_estimate(s, s.scaled(2.0)).exp_delta == pytest.approx(1.0, abs=1e-12)
    assert delta_estimate(s.scaled(0.3), s).exp_delta == pytest.approx(1.0, abs=1e-12)


def test_delta_is_symmetric():
    s1 = hyperbolic_spectrum(REP, 2)
    s2 = cubical_spectrum(eta("a1 a2 b1 b2"), REP, 2)
    assert delta_estimate(s1, s2).exp_delta == pytest.approx(delta_estimate(s2, s1).exp_delta, rel=1e-12)
    assert delta_estimate(s1, s2).exp_delta >= 1 + 1e-9


def test_zero_entry_gives_infinite_delta():
    comp = delta_estimate(hyperbolic_spectrum(REP, 1), cubical_spectrum(eta("a1"), REP, 1))
    assert comp.infinite and math.isinf(comp.exp_delta)
    assert cc("a2") in comp.zero_witnesses


def test_mismatched_class_lists():
    with pytest.raises(SpectrumMismatch):
        delta_estimate(hyperbolic_spectrum(REP, 1), hyperbolic_spectrum(REP, 2))


def test_delta_grows_with_length():
    alpha = eta("a1 a2 b1 b2")
    d = [delta_estimate(hyperbolic_spectrum(REP, L), cubical_spectrum(alpha, REP, L)).exp_delta for L in (1, 2)]
    assert d[0] <= d[1]


def test_nondiscreteness():
    assert nondiscreteness_check(hyperbolic_spectrum(REP, 3)).found
    assert not nondiscreteness_check(cubical_spectrum(eta("a1 a2 b1 b2"), REP, 2)).found
    classes = enumerate_classes(G, 1)[:3]
    small = LengthSpectrum(tuple(zip(classes, (1, 2, 3))), "toy", 1)
    assert not nondiscreteness_check(small).found


def test_experiment_rows():
    rows = approximation_experiment(REP, [eta("a1"), eta("a1 a2 b1 b2")], 2)
    assert [r.index for r in rows] == [0, 1]
    assert not rows[0].filling_ok and rows[0].comparison.infinite
    assert rows[1].filling_ok and rows[1].comparison.exp_delta >= 1.0
    assert approximation_experiment(REP, [], 2) == []
