"""Discrete faithful representations of the surface group into PSL(2, R).

The standard representation is built from an equilateral 4g-gon centred at
the base point ``i`` whose vertex angles alternate between two values summing
to pi/(2g).  The angle split is solved for so that every generator has trace
``2 cot(pi/(4g))``; side pairings follow the commutator pattern so that the
relator ``a1 b1 A1 B1 ... ag bg Ag Bg`` maps to the identity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import brentq

from .errors import NotHyperbolic, RelatorCheckFailed
from .hypgeo import X0, Isometry, compose, dist_h2, from_disk, polygon_area, translation_length
from .words import relator

RELATOR_TOL = 1e-8

CMatrix = tuple[complex, complex, complex, complex]


@dataclass(frozen=True)
class FuchsianRep:
    """Images of a1, b1, ..., ag, bg together with covering data at the base point.

    ``covering_radius`` bounds the distance from any point of the plane to the
    nearest orbit point of the base point; ``polygon`` lists the fundamental
    polygon vertices when they are known.
    """

    genus: int
    generators: tuple[Isometry, ...]
    covering_radius: float
    polygon: tuple[complex, ...] | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if len(self.generators) != 2 * self.genus:
            raise ValueError(f"expected {2 * self.genus} generators, got {len(self.generators)}")
        res = relator_residual(self.generators, self.genus)
        if res > RELATOR_TOL:
            raise RelatorCheckFailed(f"relator residual {res:.3e} exceeds {RELATOR_TOL:g}")

    def letter(self, x: int) -> Isometry:
        g = self.generators[abs(x) - 1]
        return g if x > 0 else g.inverse()


def _product(gens: Sequence[Isometry], word: Iterable[int]) -> Isometry:
    m = Isometry.identity()
    for x in word:
        g = gens[abs(x) - 1]
        m = compose(m, g if x > 0 else g.inverse())
    return m


def relator_residual(gens: Sequence[Isometry], genus: int) -> float:
    """Entrywise distance of the relator image from +I or -I."""
    m = _product(gens, relator(genus))
    e = m.entries()
    plus = max(abs(e[0] - 1), abs(e[1]), abs(e[2]), abs(e[3] - 1))
    minus = max(abs(e[0] + 1), abs(e[1]), abs(e[2]), abs(e[3] + 1))
    return min(plus, minus)


def evaluate(rep: FuchsianRep, word: Iterable[int]) -> Isometry:
    return _product(rep.generators, word)


def evaluate_hyperbolic(rep: FuchsianRep, word: Iterable[int]) -> Isometry:
    m = evaluate(rep, word)
    if abs(m.trace) <= 2.0 + 1e-6:
        raise NotHyperbolic(f"trace {m.trace!r} of a nontrivial element")
    return m


# -- disk-model helpers for the polygon construction ---------------------------

def _cmul(p: CMatrix, q: CMatrix) -> CMatrix:
    return (p[0] * q[0] + p[1] * q[2], p[0] * q[1] + p[1] * q[3],
            p[2] * q[0] + p[3] * q[2], p[2] * q[1] + p[3] * q[3])


def _cinv(p: CMatrix) -> CMatrix:
    return (p[3], -p[1], -p[2], p[0])


def _cact(p: CMatrix, z: complex) -> complex:
    return (p[0] * z + p[1]) / (p[2] * z + p[3])


def _translate_from_origin(p: complex) -> CMatrix:
    s = math.sqrt(1.0 - abs(p) ** 2)
    return (1 / s, p / s, p.conjugate() / s, 1 / s)


def _pair_segments(p: complex, q: complex, p2: complex, q2: complex) -> CMatrix:
    """Disk isometry sending p to p2 and the direction of q to that of q2."""
    a = _cinv(_translate_from_origin(p))
    b = _cinv(_translate_from_origin(p2))
    phi = math.atan2(_cact(b, q2).imag, _cact(b, q2).real) - math.atan2(_cact(a, q).imag, _cact(a, q).real)
    rot = (complex(math.cos(phi / 2), math.sin(phi / 2)), 0j, 0j, complex(math.cos(phi / 2), -math.sin(phi / 2)))
    return _cmul(_translate_from_origin(p2), _cmul(rot, a))


def _disk_to_upper(m: CMatrix) -> Isometry:
    # conjugate by the Cayley transform z -> (z - i)/(z + i)
    c = (1, -1j, 1, 1j)
    ci = (0.5, 0.5, 0.5j, -0.5j)
    r = _cmul(ci, _cmul(m, c))
    det = r[0] * r[3] - r[1] * r[2]
    s = det ** 0.5
    r = tuple(x / s for x in r)
    big = max(r, key=abs)
    ph = big / abs(big)
    r = tuple(x / ph for x in r)
    if max(abs(x.imag) for x in r) > 1e-9:
        raise ArithmeticError("disk isometry did not descend to a real matrix")
    return Isometry.from_entries(*(x.real for x in r))


def _polygon_disk(genus: int, alpha_even: float) -> list[complex]:
    beta = math.pi / (2 * genus)
    alpha_odd = beta - alpha_even
    # vertex distances from the centre for an equilateral polygon with these half-angles
    ch_e = (math.cos(alpha_odd) + math.cos(beta) * math.cos(alpha_even)) / (math.sin(beta) * math.sin(alpha_even))
    ch_o = (math.cos(alpha_even) + math.cos(beta) * math.cos(alpha_odd)) / (math.sin(beta) * math.sin(alpha_odd))
    r_e = math.tanh(math.acosh(ch_e) / 2)
    r_o = math.tanh(math.acosh(ch_o) / 2)
    return [(r_e if m % 2 == 0 else r_o) * complex(math.cos(m * beta), math.sin(m * beta))
            for m in range(4 * genus)]


def _side_pairings(genus: int, alpha_even: float) -> tuple[list[Isometry], list[complex]]:
    v = _polygon_disk(genus, alpha_even)
    n = 4 * genus
    gens: list[Isometry] = []
    for i in range(genus):
        a = _pair_segments(v[(4 * i + 2) % n], v[(4 * i + 3) % n], v[(4 * i + 1) % n], v[(4 * i) % n])
        b = _pair_segments(v[(4 * i + 1) % n], v[(4 * i + 2) % n], v[(4 * i + 4) % n], v[(4 * i + 3) % n])
        gens += [_disk_to_upper(a), _disk_to_upper(b)]
    return gens, [from_disk(z) for z in v]


def side_pairing_residual(rep: FuchsianRep) -> float:
    """How far each generator is from mapping its polygon side onto the partner side."""
    if rep.polygon is None:
        raise ValueError("representation has no polygon")
    v = rep.polygon
    n = len(v)
    worst = 0.0
    for i in range(rep.genus):
        a, b = rep.generators[2 * i], rep.generators[2 * i + 1]
        pairs = [(a, 4 * i + 2, 4 * i + 1), (a, 4 * i + 3, 4 * i),
                 (b, 4 * i + 1, 4 * i + 4), (b, 4 * i + 2, 4 * i + 3)]
        for g, src, dst in pairs:
            worst = max(worst, dist_h2(g(v[src % n]), v[dst % n]))
    return worst


@lru_cache(maxsize=None)
def standard_rep(genus: int) -> FuchsianRep:
    """Standard representation with all generator traces equal to 2 cot(pi/(4g))."""
    if genus < 2:
        raise ValueError("genus must be at least 2")
    beta = math.pi / (2 * genus)
    target = 2.0 / math.tan(math.pi / (4 * genus))

    def excess(alpha_even: float) -> float:
        return abs(_side_pairings(genus, alpha_even)[0][0].trace) - target

    alpha = brentq(excess, 1e-6 * beta, beta / 2, xtol=1e-15, rtol=1e-15)
    gens, poly = _side_pairings(genus, alpha)
    # the polygon bound is rigorous but loose; the padded Dirichlet estimate is
    # much tighter and keeps orbit searches small
    radius = min(max(dist_h2(X0, z) for z in poly), dirichlet_radius(gens))
    return FuchsianRep(genus, tuple(gens), radius, tuple(poly))


def standard_area_residual(rep: FuchsianRep) -> float:
    """Difference between the polygon area and 2 pi (2g - 2)."""
    if rep.polygon is None:
        raise ValueError("representation has no polygon")
    return abs(polygon_area(list(rep.polygon)) - 2 * math.pi * (2 * rep.genus - 2))


def _orbit_points(gens: Sequence[Isometry], depth: int) -> list[complex]:
    """Distinct orbit points of the base point at word length 1..depth."""
    letters = np.array([[[m.a, m.b], [m.c, m.d]] for h in gens for m in (h, h.inverse())])
    frontier = np.eye(2)[None]
    seen = {(0, 0)}
    pts: list[complex] = []
    for _ in range(depth):
        cand = np.einsum("fij,gjk->fgik", frontier, letters).reshape(-1, 2, 2)
        z = (cand[:, 0, 0] * 1j + cand[:, 0, 1]) / (cand[:, 1, 0] * 1j + cand[:, 1, 1])
        keys = zip(np.rint(z.real * 1e7).astype(np.int64).tolist(),
                   np.rint(np.log(z.imag) * 1e7).astype(np.int64).tolist())
        keep = []
        for idx, key in enumerate(keys):
            if key not in seen:
                seen.add(key)
                keep.append(idx)
                pts.append(complex(z[idx]))
        frontier = cand[keep]
    return pts


def dirichlet_radius(gens: Sequence[Isometry], depth: int = 4, samples: int = 2880) -> float:
    """Estimate of the covering radius from the Dirichlet cell at the base point.

    Each sampled direction is followed to the nearest bisector with an orbit
    point; the largest such distance, padded by 5%, is returned.
    """
    from .hypgeo import to_disk

    pts = _orbit_points(gens, depth)
    d = np.array([dist_h2(z, X0) for z in pts])
    order = np.argsort(d)
    u = np.array([to_disk(pts[i]) for i in order])
    phi = np.angle(u)
    t = np.tanh(d[order] / 2)
    th = 2 * np.pi * np.arange(samples) / samples

    def cell_radius(n: int) -> float:
        c = np.cos(th[:, None] - phi[None, :n])
        with np.errstate(divide="ignore", invalid="ignore"):
            reach = np.where(c > t[None, :n], np.arctanh(t[None, :n] / c), np.inf)
        return float(reach.min(axis=1).max())

    # fewer points can only enlarge the cell, so a bound from the nearest
    # points limits which farther points can still cut it
    best = cell_radius(min(len(t), 64 * len(gens)))
    if not math.isfinite(best):
        best = cell_radius(len(t))
        if not math.isfinite(best):
            raise ValueError("orbit too sparse to bound the covering radius")
    best = cell_radius(int(np.searchsorted(d[order], 2 * best, side="right")))
    return 1.05 * best


def rep_from_matrices(genus: int, mats: Sequence[Sequence[float]]) -> FuchsianRep:
    """Representation from user-supplied generator matrices, relator checked."""
    gens = tuple(Isometry.from_entries(*m) for m in mats)
    if len(gens) != 2 * genus:
        raise ValueError(f"expected {2 * genus} matrices, got {len(gens)}")
    res = relator_residual(gens, genus)
    if res > RELATOR_TOL:
        raise RelatorCheckFailed(f"relator residual {res:.3e} exceeds {RELATOR_TOL:g}")
    std = standard_rep(genus)
    if all(max(abs(x - y) for x, y in zip(g.entries(), h.entries())) < 1e-9
           for g, h in zip(gens, std.generators)):
        return std
    return FuchsianRep(genus, gens, dirichlet_radius(gens), None)


def generator_lengths(rep: FuchsianRep) -> list[float]:
    return [translation_length(g) for g in rep.generators]

