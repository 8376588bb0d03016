"""Walls from axis translates and finite pieces of the dual cube complex.

Each wall is a translate of an atom's axis; it cuts the circle into two arcs
and the plane into two halfplanes.  A vertex of the dual complex chooses one
halfplane per wall, never two disjoint ones.  Vertices are stored as bitmasks
over the wall list: bit i is set when the vertex leaves the base choice at
wall i.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import NamedTuple

import networkx as nx

from .currents import WeightedCurrent, intersection_number
from .errors import BudgetExceeded, InconsistentWalls, NotDiscrete, NotStabilized
from .fuchsian import FuchsianRep
from .hypgeo import X0, BoundaryPoint, Isometry
from .linking import SearchOptions, class_geometry, stable_crossings
from .words import ConjugacyClass, Word, format_word

SIDE_TOL = 1e-9
NEST_TOL = 1e-9
PERTURB = 1e-6


@dataclass(frozen=True)
class Wall:
    """A translate of an atom's axis.

    Walls built along a class are expressed in the frame of that class's
    axis (anchor at i, repelling end at 0), where walls far along a long
    window keep well separated coordinates.
    """

    conjugator: Word
    atom: ConjugacyClass
    attracting: BoundaryPoint
    repelling: BoundaryPoint
    param: float

    @property
    def id(self) -> str:
        return f"{self.param:.9f}:{_slope(self):.9f}"

    def to_json(self) -> dict:
        return {"id": self.id, "conjugator": format_word(self.conjugator), "atom": str(self.atom),
                "attracting": _fmt_point(self.attracting), "repelling": _fmt_point(self.repelling),
                "param": self.param}


def _fmt_point(x: BoundaryPoint) -> float | str:
    return "inf" if x.value is None else x.value


def _hom(x: BoundaryPoint) -> tuple[float, float]:
    # unnormalized, so that huge frame coordinates do not underflow
    return (1.0, 0.0) if x.value is None else (x.value, 1.0)


def _bracket(u: tuple[float, float], v: tuple[float, float]) -> float:
    return u[0] * v[1] - u[1] * v[0]


def _slope(w: "Wall") -> float:
    """Scale-free direction of the wall, (x + y) / |x - y| for finite ends."""
    (p1, q1), (p2, q2) = _hom(w.attracting), _hom(w.repelling)
    return (p1 * q2 + p2 * q1) / abs(_bracket((p1, q1), (p2, q2)))


def _near(u: tuple[float, float], v: tuple[float, float]) -> bool:
    """Equal boundary points, up to a relative tolerance invariant under dilation."""
    return abs(_bracket(u, v)) <= NEST_TOL * max(abs(u[0]) * abs(v[1]) + abs(u[1]) * abs(v[0]),
                                                 abs(u[1] * v[1]))


def _same_ends(p: Wall, q: Wall) -> bool:
    pa, pr, qa, qr = _hom(p.attracting), _hom(p.repelling), _hom(q.attracting), _hom(q.repelling)
    return (_near(pa, qa) and _near(pr, qr)) or (_near(pa, qr) and _near(pr, qa))


def build_wall_set(alpha: WeightedCurrent, c: ConjugacyClass, N: int, rep: FuchsianRep,
                   opts: SearchOptions = SearchOptions()) -> list[Wall]:
    """Walls crossing N periods of the axis of c, ordered along the axis, in its frame."""
    if not alpha.is_discrete:
        raise NotDiscrete("walls need a current with all weights equal to one")
    if N < 1:
        raise ValueError("N must be positive")
    walls: list[Wall] = []
    for atom, _ in alpha.atoms:
        res = stable_crossings(rep, atom.word, c.word, N, opts)
        if not res.stabilized:
            raise NotStabilized(f"walls of {atom} along {c} did not stabilize")
        for cr in res.crossings:
            walls.append(Wall(cr.conjugator, atom, BoundaryPoint.finite(cr.x), BoundaryPoint.finite(cr.y),
                              cr.param))
    walls.sort(key=lambda w: (w.param, w.atom.sort_key(), w.id))
    for i in range(len(walls)):
        for j in range(i + 1, len(walls)):
            if abs(walls[j].param - walls[i].param) > 1e-6:
                break
            if _same_ends(walls[i], walls[j]):
                raise NotDiscrete(f"atoms {walls[i].atom} and {walls[j].atom} share an axis")
    return walls


def boundary_side(wall: Wall, x: BoundaryPoint) -> int:
    """+1 or -1 for the arc containing x, 0 when x is an endpoint."""
    u = _hom(x)
    a, r = _hom(wall.attracting), _hom(wall.repelling)
    if _near(u, a) or _near(u, r):
        return 0
    return 1 if _bracket(u, a) * _bracket(u, r) > 0 else -1


def point_side(wall: Wall, z: complex) -> float:
    """Signed relative power of z with respect to the wall; the sign names the halfplane.

    The sign matches :func:`boundary_side` for boundary points of the same halfplane.
    """
    (p1, q1), (p2, q2) = _hom(wall.attracting), _hom(wall.repelling)
    zz = abs(z) ** 2
    mid = (p1 * q2 + p2 * q1) * z.real
    power = q1 * q2 * zz - mid + p1 * p2
    return power / (abs(q1 * q2) * zz + abs(mid) + abs(p1 * p2))


def _toward(z: complex, target: BoundaryPoint, eps: float) -> complex:
    """Move z a hyperbolic distance eps along the geodesic ray towards target."""
    if target.value is None:
        f = Isometry.identity()
    else:
        f = Isometry(0.0, -1.0, 1.0, -target.value)   # target -> infinity
    w = f(z)
    return f.inverse()(complex(w.real, w.imag * math.exp(eps)))


def orientation_of_point(walls: list[Wall], z: complex, toward: BoundaryPoint | None = None) -> list[int]:
    """Side (+1/-1) of each wall containing z, nudging z off any wall it lies on."""
    out = []
    for w in walls:
        s = point_side(w, z)
        if abs(s) < SIDE_TOL:
            if toward is None:
                raise InconsistentWalls(f"point lies on wall {w.id} and no tie-break was given")
            s = point_side(w, _toward(z, toward, PERTURB))
            if abs(s) < SIDE_TOL:
                raise InconsistentWalls(f"tie-break failed on wall {w.id}")
        out.append(1 if s > 0 else -1)
    return out


@dataclass(frozen=True)
class CubeFragment:
    walls: tuple[Wall, ...]
    base_sides: tuple[int, ...]
    vertices: tuple[int, ...]
    crossing: tuple[tuple[bool, ...], ...]
    region: str

    @property
    def edges(self) -> list[tuple[int, int]]:
        vs = set(self.vertices)
        out = []
        for v in self.vertices:
            for i in range(len(self.walls)):
                u = v ^ (1 << i)
                if u in vs and v < u:
                    out.append((v, u))
        return sorted(out)

    def neighbours(self, v: int) -> list[int]:
        vs = set(self.vertices)
        return [v ^ (1 << i) for i in range(len(self.walls)) if v ^ (1 << i) in vs]

    def to_json(self) -> dict:
        return {"region": self.region,
                "walls": [w.to_json() for w in self.walls],
                "base_sides": list(self.base_sides),
                "vertices": list(self.vertices),
                "edges": [list(e) for e in self.edges]}


class _Consistency:
    """Pairwise constraints: bit i of ``away[j]`` is the value that points wall j away from wall i."""

    def __init__(self, walls: list[Wall], base_sides: list[int]):
        n = len(walls)
        self.crossing = [[False] * n for _ in range(n)]
        self.away = [[0] * n for _ in range(n)]   # away[i][j]: bit value of i facing away from j
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                sa = boundary_side(walls[i], walls[j].attracting)
                sr = boundary_side(walls[i], walls[j].repelling)
                if sa == 0 or sr == 0:
                    raise InconsistentWalls(f"walls {walls[i].id} and {walls[j].id} share an endpoint")
                if sa != sr:
                    self.crossing[i][j] = True
                    continue
                # side of wall i holding wall j; facing away means the other side
                self.away[i][j] = 0 if -sa == base_sides[i] else 1
        self.n = n
        # conflict masks: setting bit i to b conflicts with j when b == away[i][j] and bit j == away[j][i]
        self.mask = [[0, 0] for _ in range(n)]
        self.target = [0] * n
        for i in range(n):
            for j in range(n):
                if i == j or self.crossing[i][j]:
                    continue
                self.mask[i][self.away[i][j]] |= 1 << j
                self.target[i] |= self.away[j][i] << j

    def admissible(self, v: int, i: int) -> bool:
        u = v ^ (1 << i)
        bit = (u >> i) & 1
        return (~(u ^ self.target[i])) & self.mask[i][bit] == 0

    def consistent(self, v: int) -> bool:
        for i in range(self.n):
            bit = (v >> i) & 1
            if (~(v ^ self.target[i])) & self.mask[i][bit]:
                return False
        return True


def sageev_fragment(walls: list[Wall], rep: FuchsianRep | None = None, basepoint: complex = X0,
                    toward: BoundaryPoint | None = None, max_vertices: int = 4096,
                    region: str = "") -> CubeFragment:
    """All consistent orientations reachable from the base by single flips."""
    if not walls:
        raise ValueError("need at least one wall")
    ids = [w.id for w in walls]
    if len(set(ids)) != len(ids):
        raise ValueError("wall ids must be distinct")
    base = orientation_of_point(walls, basepoint, toward)
    cons = _Consistency(walls, base)
    seen = {0}
    order = [0]
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for i in range(len(walls)):
            u = v ^ (1 << i)
            if u in seen or not cons.admissible(v, i):
                continue
            seen.add(u)
            order.append(u)
            queue.append(u)
            if len(seen) > max_vertices:
                raise BudgetExceeded(f"fragment exceeds {max_vertices} vertices")
    crossing = tuple(tuple(row) for row in cons.crossing)
    return CubeFragment(tuple(walls), tuple(base), tuple(sorted(order)), crossing, region)


def bfs_distances(f: CubeFragment, source: int) -> dict[int, int]:
    dist = {source: 0}
    queue = deque([source])
    while queue:
        v = queue.popleft()
        for u in f.neighbours(v):
            if u not in dist:
                dist[u] = dist[v] + 1
                queue.append(u)
    return dist


class VertexNotInFragment(KeyError):
    pass


def fragment_distance(f: CubeFragment, v: int, w: int) -> int:
    """Number of walls separating v and w; checked against the edge-path distance."""
    vs = set(f.vertices)
    for x in (v, w):
        if x not in vs:
            raise VertexNotInFragment(x)
    d = bin(v ^ w).count("1")
    bfs = bfs_distances(f, v)[w]
    if bfs != d:
        raise AssertionError(f"partial cube law broken: {bfs} edges vs {d} walls")
    return d


class CubeDimension(NamedTuple):
    value: int
    exact: bool


def max_cube_dimension(f: CubeFragment, exact_limit: int = 20) -> CubeDimension:
    """Largest family of pairwise crossing walls."""
    n = len(f.walls)
    g = nx.Graph()
    g.add_nodes_from(range(n))
    g.add_edges_from((i, j) for i in range(n) for j in range(i + 1, n) if f.crossing[i][j])
    if n <= exact_limit:
        clique, _ = nx.max_weight_clique(g, weight=None)
        return CubeDimension(len(clique), True)
    best: list[int] = []
    for start in range(n):
        cl = [start]
        for v in sorted(g.neighbors(start), key=lambda x: -g.degree(x)):
            if all(g.has_edge(v, u) for u in cl):
                cl.append(v)
        best = max(best, cl, key=len)
    return CubeDimension(len(best), False)


def cubical_length(alpha: WeightedCurrent, c: ConjugacyClass, rep: FuchsianRep,
                   opts: SearchOptions = SearchOptions()) -> int:
    """Translation length of c on the dual complex, i.e. i(alpha, c)."""
    if not alpha.is_discrete:
        raise NotDiscrete("cubical length needs a current with all weights equal to one")
    res = intersection_number(alpha, c, rep, opts)
    if not res.stabilized:
        raise NotStabilized(f"count for class {c} did not stabilize")
    return int(res.value)


@dataclass(frozen=True)
class DualityReport:
    atoms: str
    word: str
    N: int
    separation: int
    expected: int
    walls: int
    consistent: bool
    passed: bool

    def to_json(self) -> dict:
        return {"current": self.atoms, "class": self.word, "N": self.N, "separation": self.separation,
                "expected": self.expected, "walls": self.walls, "consistent": self.consistent,
                "pass": self.passed}


def verify_duality(alpha: WeightedCurrent, c: ConjugacyClass, N: int, rep: FuchsianRep,
                   opts: SearchOptions = SearchOptions()) -> DualityReport:
    """Compare the wall separation of v and c^N v with N times the intersection number.

    The base vertex is the orientation of the anchor point on the axis of c;
    its translate is the orientation of c^N applied to that point.  Both are
    read in the frame of the axis, like the walls.  Points on a
    wall are nudged towards the repelling end of the axis of c, matching the
    half-open window of crossing parameters.
    """
    if N < 1:
        raise ValueError("N must be positive")
    walls = build_wall_set(alpha, c, N, rep, opts)
    expected = N * cubical_length(alpha, c, rep, opts)
    geo = class_geometry(rep, c.word)
    if not walls:
        return DualityReport(str(alpha), str(c), N, 0, expected, 0, True, expected == 0)
    # in the frame of the axis, c^N moves the anchor i up to i e^(N length)
    toward = BoundaryPoint.finite(0.0)
    v0 = orientation_of_point(walls, 1j, toward)
    v1 = orientation_of_point(walls, 1j * math.exp(N * geo.length), toward)
    cons = _Consistency(walls, v0)
    mask = sum(1 << i for i in range(len(walls)) if v0[i] != v1[i])
    separation = bin(mask).count("1")
    ok = cons.consistent(0) and cons.consistent(mask)
    return DualityReport(str(alpha), str(c), N, separation, expected, len(walls), ok,
                         ok and separation == expected)

