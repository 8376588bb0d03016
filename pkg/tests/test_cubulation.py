import itertools
import math
import random

import numpy as np
import pytest

from cubecurrents.cubulation import (Wall, build_wall_set, bfs_distances, cubical_length, fragment_distance,
                                     max_cube_dimension, sageev_fragment, verify_duality)
from cubecurrents.currents import WeightedCurrent
from cubecurrents.errors import NotDiscrete
from cubecurrents.fuchsian import evaluate, standard_rep
from cubecurrents.hypgeo import BoundaryPoint, compose, fixed_points
from cubecurrents.linking import class_geometry
from cubecurrents.words import ConjugacyClass

REP = standard_rep(2)
G = 2


def cc(text):
    return ConjugacyClass.parse(text, G)


def eta(*words):
    return WeightedCurrent.from_items(G, [(w, 1) for w in words])


def wall(x, y, param=0.0):
    atom = cc("a1")
    return Wall((), atom, BoundaryPoint.finite(x), BoundaryPoint.finite(y), param)


def test_wall_counts():
    assert len(build_wall_set(eta("a1"), cc("b1"), 1, REP)) == 1
    assert build_wall_set(eta("a1"), cc("a2"), 3, REP) == []


def test_two_periods_are_one_period_and_its_translate():
    c = cc("a1 b2")
    one = build_wall_set(eta("b1 a2"), c, 1, REP)
    two = build_wall_set(eta("b1 a2"), c, 2, REP)
    ell = class_geometry(REP, c.word).length
    assert len(two) == 2 * len(one)
    shifted = [w.param + ell for w in one]
    assert [w.param for w in two] == pytest.approx([w.param for w in one] + shifted, abs=1e-9)
    for w1, w2 in zip(one, two[len(one):]):
        assert w2.attracting.value == pytest.approx(w1.attracting.value * math.exp(ell), rel=1e-9)


def test_wall_pairs_are_images_of_the_atom_axis():
    c = cc("a1 b1")
    frame = class_geometry(REP, c.word).frame
    for w in build_wall_set(eta("a2 b1", "a1"), c, 1, REP):
        image = fixed_points(evaluate(REP, w.atom.word)).moved(compose(frame, evaluate(REP, w.conjugator)))
        got = {round(w.attracting.value, 6), round(w.repelling.value, 6)}
        want = {round(image.attracting.value, 6), round(image.repelling.value, 6)}
        assert got == want


def test_walls_need_unit_weights():
    with pytest.raises(NotDiscrete):
        build_wall_set(WeightedCurrent.from_items(G, [("a1", 2)]), cc("b1"), 1, REP)


def test_cubical_length_examples():
    assert cubical_length(eta("a1"), cc("b1"), REP) == 1
    assert cubical_length(eta("a1"), cc("a2"), REP) == 0
    c = cc("a1 b2 b2")
    assert cubical_length(eta("b1"), ConjugacyClass.of(c.word * 3, G), REP) == 3 * cubical_length(eta("b1"), c, REP)


def test_fragment_of_one_wall():
    f = sageev_fragment([wall(-1.0, 1.0)], basepoint=2j)
    assert len(f.vertices) == 2 and len(f.edges) == 1
    assert max_cube_dimension(f).value == 1


def test_fragment_of_linked_walls_is_a_square():
    f = sageev_fragment([wall(-1.0, 1.0, 0.0), wall(0.0, 3.0, 0.5)], basepoint=0.5 + 0.2j)
    assert len(f.vertices) == 4 and len(f.edges) == 4
    assert max_cube_dimension(f).value == 2


def test_fragment_of_nested_walls_is_a_path():
    f = sageev_fragment([wall(-1.0, 1.0, 0.0), wall(-4.0, 4.0, 1.0)], basepoint=0.5j)
    assert len(f.vertices) == 3 and len(f.edges) == 2


def test_distinct_ids_required():
    with pytest.raises(ValueError):
        sageev_fragment([wall(-1.0, 1.0), wall(-1.0, 1.0)], basepoint=2j)


def test_fragment_distances_match_bfs():
    walls = build_wall_set(eta("a1", "b1"), cc("a1 b1"), 2, REP)
    f = sageev_fragment(walls, REP, toward=BoundaryPoint.finite(0.0))
    assert fragment_distance(f, f.vertices[0], f.vertices[0]) == 0
    for v, u in f.edges:
        assert fragment_distance(f, v, u) == 1
    rng = random.Random(5)
    for _ in range(50):
        v, u = rng.choice(f.vertices), rng.choice(f.vertices)
        assert bfs_distances(f, v)[u] == bin(v ^ u).count("1")


def test_duality_examples():
    rep = verify_duality(eta("a1"), cc("b1"), 4, REP)
    assert rep.separation == 4 and rep.expected == 4 and rep.passed
    zero = verify_duality(eta("a1"), cc("a2"), 3, REP)
    assert zero.separation == 0 and zero.passed


@pytest.mark.parametrize("h,c,N", [("a1 b2", "b1 a2", 2), ("a1 a2 b1", "b1 b2", 4), ("b1", "a1 a1 b2", 4)])
def test_duality_longer_windows(h, c, N):
    assert verify_duality(eta(h), cc(c), N, REP).passed


def test_cube_dimension_matches_exhaustive_search():
    walls = build_wall_set(eta("a1", "b1"), cc("a1 b2 B1"), 2, REP)
    f = sageev_fragment(walls, REP, toward=BoundaryPoint.finite(0.0))
    n = len(walls)
    best = 1
    for k in range(2, n + 1):
        if any(all(f.crossing[i][j] for i, j in itertools.combinations(sub, 2))
               for sub in itertools.combinations(range(n), k)):
            best = k
    assert max_cube_dimension(f).value == best
    assert np.all(np.array(f.crossing) == np.array(f.crossing).T)
