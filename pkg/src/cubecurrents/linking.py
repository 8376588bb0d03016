"""Enumeration of group translates of one axis that cross a window of another.

For a class ``c`` the window is the segment of its axis between the anchor
(the foot of the perpendicular from the base point) and ``periods`` times the
translation length further on.  Tiles are orbit points ``u x0`` within
``covering_radius + margin`` of the window; arcs are the translates of
``axis(h)`` passing within the same distance of ``x0``.  Every crossing of a
translate of ``axis(h)`` with the window lies near some tile, so the
candidates ``u axis`` contain all crossings once the margin is nonnegative;
the margin only adds slack against rounding.

Far along a long axis, products of generator matrices lose all precision.
The window is therefore cut into pieces, each handled in the coordinates of
a cyclic rotation of ``c`` whose axis passes near ``x0``, and arcs are built
from rotations of ``h`` the same way.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import kernels
from .errors import AmbiguousAxes, BudgetExceeded
from .fuchsian import FuchsianRep, evaluate, evaluate_hyperbolic
from .hypgeo import (X0, AxisPair, Isometry, SHARED_ENDPOINT_TOL, axis_frame,
                     compose, dist_h2, fixed_points, geodesic_through, translation_length)
from .words import Word, dehn_reduce, inverse, order_key

WINDOW_TOL = 1e-9       # window is [-tol, periods * length - tol)
DEDUP_TOL = 1e-8        # chordal distance below which two axes are the same
GROUP_TOL = 1e-4        # raw hits closer than this are split by the word problem
RAW_SLACK = 1e-4        # widening of the raw scan window before exact re-evaluation
STEP_SLACK = 0.25       # extra reach of the flood-fill moves beyond twice the covering radius


@dataclass(frozen=True)
class SearchOptions:
    """Knobs of the margin-doubling search."""

    initial_margin: float = 0.5
    doublings_cap: int = 4
    max_tiles: int = 200_000
    shards: int = 1


@dataclass(frozen=True)
class ClassGeometry:
    word: Word
    element: Isometry
    axis: AxisPair
    length: float
    frame: Isometry         # axis -> imaginary axis, anchor -> i
    anchor: complex
    offset: float           # distance from the base point to the axis
    connector: tuple[Isometry, float] | None


@lru_cache(maxsize=4096)
def class_geometry(rep: FuchsianRep, word: Word) -> ClassGeometry:
    g = evaluate_hyperbolic(rep, word)
    axis = fixed_points(g)
    frame = axis_frame(axis, X0)
    anchor = frame.inverse()(1j)
    offset = dist_h2(X0, anchor)
    connector = None
    if offset > 1e-12:
        conn_axis = geodesic_through(X0, anchor)
        connector = (axis_frame(conn_axis, X0), offset)
    return ClassGeometry(word, g, axis, translation_length(g), frame, anchor, offset, connector)


@dataclass(frozen=True)
class Region:
    mats: np.ndarray          # (k, 2, 2)
    words: tuple[Word, ...]


def _orbit_keys(mats: np.ndarray) -> list[tuple[int, int]]:
    a, b, c, d = mats[:, 0, 0], mats[:, 0, 1], mats[:, 1, 0], mats[:, 1, 1]
    z = (a * 1j + b) / (c * 1j + d)
    u = (z - 1j) / (z + 1j)
    kr = np.rint(u.real * 1e9).astype(np.int64)
    ki = np.rint(u.imag * 1e9).astype(np.int64)
    return list(zip(kr.tolist(), ki.tolist()))


class _PointSet:
    """Orbit points near the imaginary axis, compared in (log height, angle).

    Long products carry relative errors far above 1e-9, so points count as
    equal within ``tol``; distinct orbit points are much further apart.
    """

    CELL = 1e-2

    def __init__(self, tol: float = 1e-5):
        self.tol = tol
        self.cells: dict[tuple[int, int], list[tuple[float, float]]] = {}

    @staticmethod
    def coords(mats: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        z = (mats[:, 0, 0] * 1j + mats[:, 0, 1]) / (mats[:, 1, 0] * 1j + mats[:, 1, 1])
        return np.log(np.abs(z)), np.arctan2(z.real, z.imag)

    def add(self, u: float, v: float) -> bool:
        """Insert the point; False when an equal point is already present."""
        cu, cv = int(math.floor(u / self.CELL)), int(math.floor(v / self.CELL))
        for du in (-1, 0, 1):
            for dv in (-1, 0, 1):
                for p, q in self.cells.get((cu + du, cv + dv), ()):
                    if abs(p - u) < self.tol and abs(q - v) < self.tol:
                        return False
        self.cells.setdefault((cu, cv), []).append((u, v))
        return True


@dataclass(frozen=True)
class Steps:
    mats: np.ndarray          # (k, 2, 2)
    words: tuple[Word, ...]


@lru_cache(maxsize=64)
def steps(rep: FuchsianRep, max_depth: int = 10) -> Steps:
    """Nontrivial elements moving the base point by at most twice the covering radius.

    Orbit points within the covering radius of a connected path are linked by
    these moves: nearest orbit points of two nearby path points differ by one.
    The ball is grown by word length until a whole layer stays clear of the
    radius by the largest generator displacement.
    """
    radius = 2.0 * rep.covering_radius + STEP_SLACK
    letters = [x for i in range(1, 2 * rep.genus + 1) for x in (i, -i)]
    gens = np.array([[[m.a, m.b], [m.c, m.d]] for m in (rep.letter(x) for x in letters)])
    reach = max(dist_h2(X0, rep.letter(x)(X0)) for x in letters)
    frontier = np.eye(2)[None]
    frontier_words: list[Word] = [()]
    seen = set(_orbit_keys(frontier))
    mats, words = [], []
    for _ in range(max_depth):
        cand = np.einsum("fij,gjk->fgik", frontier, gens).reshape(-1, 2, 2)
        z = (cand[:, 0, 0] * 1j + cand[:, 0, 1]) / (cand[:, 1, 0] * 1j + cand[:, 1, 1])
        dist = 2.0 * np.arcsinh(np.abs(z - 1j) / (2.0 * np.sqrt(z.imag)))
        keys = _orbit_keys(cand)
        nxt, nxt_words = [], []
        for idx in np.argsort(dist, kind="stable").tolist():
            if keys[idx] in seen or dist[idx] > radius + reach:
                continue
            seen.add(keys[idx])
            w = frontier_words[idx // len(letters)] + (letters[idx % len(letters)],)
            nxt.append(cand[idx])
            nxt_words.append(w)
            if dist[idx] <= radius:
                mats.append(cand[idx])
                words.append(w)
        if not nxt:
            break
        frontier = np.array(nxt)
        frontier_words = nxt_words
    return Steps(np.array(mats), tuple(words))


def _flood(rep: FuchsianRep, fm: np.ndarray, frames: np.ndarray, lengths: np.ndarray,
           threshold: float, max_tiles: int) -> Region:
    """Orbit points within ``threshold`` of a framed path through the base point.

    Points are compared in the coordinates given by ``fm``, in which the path
    runs near the imaginary axis.
    """
    st = steps(rep)
    mats = [np.eye(2)]
    words: list[Word] = [()]
    seen = _PointSet()
    u0, v0 = seen.coords(fm[None])
    seen.add(float(u0[0]), float(v0[0]))
    frontier = np.eye(2)[None]
    frontier_words: list[Word] = [()]
    k = len(st.words)
    while len(frontier):
        cand = np.einsum("fij,gjk->fgik", frontier, st.mats).reshape(-1, 2, 2)
        framed = fm @ cand
        z = (framed[:, 0, 0] * 1j + framed[:, 0, 1]) / (framed[:, 1, 0] * 1j + framed[:, 1, 1])
        dist = kernels.path_distance(z.real, z.imag, frames, lengths)
        cu, cv = seen.coords(framed)
        nxt, nxt_words = [], []
        for idx in np.nonzero(dist <= threshold)[0].tolist():
            if not seen.add(float(cu[idx]), float(cv[idx])):
                continue
            nxt.append(cand[idx])
            nxt_words.append(dehn_reduce(frontier_words[idx // k] + st.words[idx % k], rep.genus))
        if len(mats) + len(nxt) > max_tiles:
            raise BudgetExceeded(f"more than {max_tiles} tiles within {threshold:.3f} of the path")
        mats += nxt
        words += nxt_words
        frontier = np.array(nxt).reshape(-1, 2, 2)
        frontier_words = nxt_words
    return Region(np.array(mats), tuple(words))


def _dilation(t: float) -> Isometry:
    return Isometry(math.exp(-t / 2.0), 0.0, 0.0, math.exp(t / 2.0))


@lru_cache(maxsize=4096)
def region(rep: FuchsianRep, word: Word, lo: float, hi: float, threshold: float, max_tiles: int) -> Region:
    """Orbit points within ``threshold`` of the axis segment [lo, hi] of ``word``.

    Parameters are measured from the anchor.  The path also includes the
    perpendicular from the base point, so the fill by ``steps`` is connected
    and reaches every orbit point within the covering radius of the segment.
    """
    geo = class_geometry(rep, word)
    fm = np.array([[geo.frame.a, geo.frame.b], [geo.frame.c, geo.frame.d]])
    frames = [_dilation(lo).entries()]
    lengths = [hi - lo]
    if geo.connector is not None:
        frames.append(compose(geo.connector[0], geo.frame.inverse()).entries())
        lengths.append(geo.connector[1])
    return _flood(rep, fm, np.array(frames, dtype=np.float64), np.array(lengths, dtype=np.float64),
                  threshold, max_tiles)


@lru_cache(maxsize=64)
def ball(rep: FuchsianRep, radius: float, max_tiles: int) -> Region:
    """Orbit points within ``radius`` of the base point."""
    frames = np.array([[1.0, 0.0, 0.0, 1.0]])
    return _flood(rep, np.eye(2), frames, np.zeros(1), radius, max_tiles)


@dataclass(frozen=True)
class Piece:
    """Part of one period of an axis, seen from a cyclic rotation of the word.

    The rotation ``prefix^-1 c prefix`` has its axis near the base point; its
    local parameters ``lo``..``hi`` correspond to ``start + lo``..``start + hi``
    along the axis of c.
    """

    prefix: Word
    rotation: Word
    start: float
    lo: float
    hi: float


@lru_cache(maxsize=4096)
def pieces(rep: FuchsianRep, word: Word) -> tuple[Piece, ...]:
    """Cover one period of the axis of ``word`` by pieces near the base point.

    Piece k runs between the projections of the orbit points of the prefixes
    of length k and k+1; consecutive projections are found locally, so no
    long product is ever evaluated.
    """
    out = []
    start = 0.0
    for k in range(len(word)):
        rot = word[k:] + word[:k]
        geo = class_geometry(rep, rot)
        step = math.log(abs(geo.frame(rep.letter(word[k])(X0))))
        out.append(Piece(word[:k], rot, start, min(0.0, step), max(0.0, step)))
        start += step
    return tuple(out)


@dataclass(frozen=True)
class Arcs:
    ends: np.ndarray          # (m, 4) homogeneous endpoints (p1, q1, p2, q2)
    words: tuple[Word, ...]   # conjugators carrying axis(h) onto each arc


def _strip_conjugator(word: Word, genus: int) -> tuple[Word, Word]:
    """Split a reduced form of ``word`` as u h u^-1 with h cyclically reduced."""
    w = dehn_reduce(word, genus)
    i = 0
    while len(w) - 2 * i >= 2 and w[i] == -w[len(w) - 1 - i]:
        i += 1
    return w[:i], w[i:len(w) - i]


@lru_cache(maxsize=4096)
def arcs(rep: FuchsianRep, word: Word, threshold: float, max_tiles: int) -> Arcs:
    """Distinct translates of axis(h) passing within ``threshold`` of the base point.

    Every such translate is s axis(r) for a cyclic rotation r of h and an
    orbit point s x0 within threshold + max offset + half the largest letter
    displacement; rotations keep each axis well conditioned near the base.
    A word that is not cyclically reduced is first written as u h' u^-1, since
    h and h' have the same orbit of axes.
    """
    outer, word = _strip_conjugator(word, rep.genus)
    rots = [word[k:] + word[:k] for k in range(len(word))]
    geos = [class_geometry(rep, r) for r in rots]
    reach = max(dist_h2(X0, rep.letter(x)(X0)) for x in set(word))
    near = ball(rep, threshold + max(g.offset for g in geos) + 0.5 * reach + 1e-6, max_tiles)
    limit = math.sinh(threshold)
    ends_list, word_list = [], []
    for k, g in enumerate(geos):
        a = near.mats @ np.array(g.axis.attracting.homogeneous())
        r = near.mats @ np.array(g.axis.repelling.homogeneous())
        a /= np.hypot(a[:, 0], a[:, 1])[:, None]
        r /= np.hypot(r[:, 0], r[:, 1])[:, None]
        # distance from i to the geodesic with these ends: sinh d = |<a, r>| / |a x r|
        keep = np.abs(a[:, 0] * r[:, 0] + a[:, 1] * r[:, 1]) \
            <= limit * np.abs(a[:, 0] * r[:, 1] - a[:, 1] * r[:, 0])
        back = inverse(word[:k]) + inverse(outer)
        for i in np.nonzero(keep)[0].tolist():
            ends_list.append(np.concatenate([a[i], r[i]]))
            word_list.append(dehn_reduce(near.words[i] + back, rep.genus))
    if not ends_list:
        return Arcs(np.empty((0, 4)), ())
    order = sorted(range(len(word_list)), key=lambda i: order_key(word_list[i]))
    ends = np.array(ends_list)[order]
    words = [word_list[i] for i in order]
    # canonical sign so that equal points get equal keys
    for col in (0, 2):
        flip = np.where(ends[:, col + 1] < 0, -1.0, 1.0)
        ends[:, col] *= flip
        ends[:, col + 1] *= flip
    keys = np.rint(np.arctan2(ends[:, 0], ends[:, 1]) * 1e9).astype(np.int64) * 7919 \
        + np.rint(np.arctan2(ends[:, 2], ends[:, 3]) * 1e9).astype(np.int64)
    _, first = np.unique(keys, return_index=True)
    first.sort()
    return Arcs(np.ascontiguousarray(ends[first]), tuple(words[i] for i in first.tolist()))


@dataclass(frozen=True)
class Crossing:
    """A translate of axis(h) crossing the window of c."""

    param: float
    conjugator: Word
    x: float                  # frame coordinates of the attracting end
    y: float                  # frame coordinates of the repelling end


def _scan(mats: np.ndarray, ends: np.ndarray, lo: float, hi: float, shards: int):
    if shards <= 1 or len(mats) < 2 * shards:
        return kernels.scan_crossings(mats, ends, lo, hi, SHARED_ENDPOINT_TOL)
    bounds = np.linspace(0, len(mats), shards + 1).astype(int)
    pieces = [(bounds[k], bounds[k + 1]) for k in range(shards)]
    with ThreadPoolExecutor(max_workers=shards) as pool:
        parts = list(pool.map(lambda p: kernels.scan_crossings(mats[p[0]:p[1]], ends, lo, hi,
                                                               SHARED_ENDPOINT_TOL), pieces))
    out = []
    for (start, _), part in zip(pieces, parts):
        out.append((part[0] + start,) + tuple(part[1:]))
    return tuple(np.concatenate([p[k] for p in out]) for k in range(5))


def _slope(x: float, y: float) -> float:
    """Scale-free direction of a geodesic crossing the imaginary axis, blind to orientation."""
    return (x + y) / abs(x - y)


def _power(h: Word, k: int) -> Word:
    return h * k if k >= 0 else inverse(h) * (-k)


def same_axis(rep: FuchsianRep, h: Word, v1: Word, v2: Word) -> bool:
    """Exact test of v1 axis(h) == v2 axis(h), i.e. v1^-1 v2 is a power of primitive h."""
    q = dehn_reduce(inverse(v1) + v2, rep.genus)
    if not q:
        return True
    m = evaluate(rep, q)
    k0 = round(translation_length(m) / class_geometry(rep, h).length)
    for k in sorted({k0, -k0, k0 + 1, -k0 - 1, k0 - 1, 1 - k0} - {0}, key=lambda x: (abs(x), x)):
        if not dehn_reduce(q + _power(h, -k), rep.genus):
            return True
    return False


def _shorten(rep: FuchsianRep, h: Word, v: Word) -> Word:
    """Shorter representative of the coset v<h>, found greedily."""
    steps = (h, inverse(h))
    while True:
        for s in steps:
            w = dehn_reduce(v + s, rep.genus)
            if len(w) < len(v):
                v = w
                break
        else:
            return v


def crossings_at(rep: FuchsianRep, h: Word, c: Word, periods: int, margin: float,
                 opts: SearchOptions = SearchOptions()) -> tuple[Crossing, ...]:
    """Distinct translates of axis(h) crossing the window of c, sorted by parameter.

    One period is scanned piece by piece near the base point; the remaining
    periods are its translates by powers of c.  Hits that agree in position
    and direction are split exactly with the word problem.
    """
    geo = class_geometry(rep, c)
    threshold = rep.covering_radius + margin
    arc = arcs(rep, h, threshold, opts.max_tiles)
    hits: dict[Word, tuple[float, float, float]] = {}
    for p in pieces(rep, c):
        tiles = region(rep, p.rotation, p.lo, p.hi, threshold, opts.max_tiles)
        frame = class_geometry(rep, p.rotation).frame
        f = np.array([[frame.a, frame.b], [frame.c, frame.d]])
        framed = (f @ tiles.mats).reshape(-1, 4)
        ii, jj, tt, xx, yy = _scan(framed, arc.ends, p.lo - RAW_SLACK, p.hi + RAW_SLACK, opts.shards)
        scale = math.exp(p.start)
        for i, j, t, x, y in zip(ii.tolist(), jj.tolist(), tt.tolist(), xx.tolist(), yy.tolist()):
            w = _shorten(rep, h, dehn_reduce(p.prefix + tiles.words[i] + arc.words[j], rep.genus))
            hits.setdefault(w, (p.start + t, x * scale, y * scale))
    rows = sorted(((t, _slope(x, y), x, y, w) for w, (t, x, y) in hits.items()),
                  key=lambda r: (r[0], order_key(r[4])))
    groups: list[list] = []   # [param, slope, members]
    for t, s, x, y, w in rows:
        home = None
        for g in reversed(groups):
            if t - g[0] > GROUP_TOL:
                break
            if abs(s - g[1]) < GROUP_TOL:
                home = g
                break
        if home is None:
            groups.append([t, s, [(w, t, s, x, y)]])
        else:
            home[2].append((w, t, s, x, y))
    lo, hi = -WINDOW_TOL, geo.length - WINDOW_TOL
    one: list[Crossing] = []
    for _, _, members in groups:
        members.sort(key=lambda m: order_key(m[0]))
        heads: list[tuple] = []
        for m in members:
            if not any(same_axis(rep, h, head[0], m[0]) for head in heads):
                heads.append(m)
        for k, a in enumerate(heads):
            for b in heads[k + 1:]:
                if abs(a[1] - b[1]) < DEDUP_TOL and abs(a[2] - b[2]) < DEDUP_TOL:
                    raise AmbiguousAxes("distinct axes that agree to within rounding")
        for w, t, _, x, y in heads:
            if lo <= t < hi:
                one.append(Crossing(t, w, x, y))
    one.sort(key=lambda cr: (cr.param, _slope(cr.x, cr.y)))
    out = list(one)
    for k in range(1, periods):
        scale = math.exp(k * geo.length)
        for cr in one:
            w = _shorten(rep, h, dehn_reduce(c * k + cr.conjugator, rep.genus))
            out.append(Crossing(cr.param + k * geo.length, w, cr.x * scale, cr.y * scale))
    return tuple(out)


def same_crossings(p: tuple[Crossing, ...], q: tuple[Crossing, ...], tol: float = 1e-7) -> bool:
    if len(p) != len(q):
        return False
    return all(abs(a.param - b.param) <= tol and abs(_slope(a.x, a.y) - _slope(b.x, b.y)) <= tol
               for a, b in zip(p, q))


@dataclass(frozen=True)
class SearchResult:
    crossings: tuple[Crossing, ...]
    stabilized: bool
    margin: float


def stable_crossings(rep: FuchsianRep, h: Word, c: Word, periods: int = 1,
                     opts: SearchOptions = SearchOptions()) -> SearchResult:
    """Double the margin until two consecutive searches agree."""
    margin = opts.initial_margin
    prev = crossings_at(rep, h, c, periods, margin, opts)
    for _ in range(opts.doublings_cap):
        nxt = crossings_at(rep, h, c, periods, 2 * margin, opts)
        if same_crossings(prev, nxt):
            return SearchResult(prev, True, margin)
        prev, margin = nxt, 2 * margin
    return SearchResult(prev, False, margin)


def lifts_near_base(rep: FuchsianRep, word: Word, radius: float,
                    opts: SearchOptions = SearchOptions()) -> np.ndarray:
    """Homogeneous endpoints of translates of axis(word) passing near the base point."""
    return arcs(rep, word, radius, opts.max_tiles).ends


def geometrically_conjugate(rep: FuchsianRep, w1: Word, w2: Word) -> bool:
    """Whether w1 is conjugate to w2 or its inverse, decided from the axes."""
    g1, g2 = class_geometry(rep, w1), class_geometry(rep, w2)
    if abs(g1.length - g2.length) > 1e-8 * max(1.0, g1.length):
        return False
    ends = lifts_near_base(rep, w1, rep.covering_radius + g2.offset + 0.5)
    a2 = np.array(g2.axis.attracting.homogeneous())
    r2 = np.array(g2.axis.repelling.homogeneous())

    def close(cols: np.ndarray, v: np.ndarray) -> np.ndarray:
        return 2.0 * np.abs(cols[:, 0] * v[1] - cols[:, 1] * v[0]) < 1e-7

    fwd = close(ends[:, 0:2], a2) & close(ends[:, 2:4], r2)
    bwd = close(ends[:, 0:2], r2) & close(ends[:, 2:4], a2)
    return bool(np.any(fwd | bwd))
