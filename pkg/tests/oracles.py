"""Brute-force references that share no code with the package's search engine.

Group elements are enumerated by word length straight from the generator
matrices, and every translate of an axis is tested against one period of
another axis in an ad hoc frame.
"""

from __future__ import annotations

import numpy as np


def generator_array(rep) -> np.ndarray:
    mats = []
    for g in rep.generators:
        m = np.array([[g.a, g.b], [g.c, g.d]])
        mats += [m, np.array([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]])]
    return np.array(mats)


def word_matrix(rep, word) -> np.ndarray:
    gens = generator_array(rep)
    m = np.eye(2)
    for x in word:
        m = m @ gens[2 * (abs(x) - 1) + (0 if x > 0 else 1)]
    return m


def ball(rep, n: int) -> np.ndarray:
    """Distinct group elements of word length <= n, told apart by where they send i."""
    gens = generator_array(rep)
    layer = np.eye(2)[None]
    out = [layer]
    seen = {_key(np.eye(2))}
    for _ in range(n):
        cand = np.einsum("fij,gjk->fgik", layer, gens).reshape(-1, 2, 2)
        keep = []
        for m in cand:
            k = _key(m)
            if k not in seen:
                seen.add(k)
                keep.append(m)
        layer = np.array(keep)
        out.append(layer)
    return np.concatenate(out)


def _key(m: np.ndarray) -> tuple[int, int]:
    z = (m[0, 0] * 1j + m[0, 1]) / (m[1, 0] * 1j + m[1, 1])
    u = (z - 1j) / (z + 1j)
    return (round(u.real * 1e8), round(u.imag * 1e8))


def axis_endpoints(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Homogeneous (attracting, repelling) fixed points from an eigen-decomposition."""
    vals, vecs = np.linalg.eig(m)
    order = np.argsort(-np.abs(vals.real))
    return vecs[:, order[0]].real, vecs[:, order[1]].real


def crossing_count(rep, h_word, c_word, n: int, start: float = 0.123) -> int:
    """Distinct translates g axis(h), |g| <= n, crossing one period of axis(c)."""
    mc = word_matrix(rep, c_word)
    length = 2.0 * np.arccosh(abs(np.trace(mc)) / 2.0)
    ca, cr = axis_endpoints(mc)
    # Moebius map sending repelling -> 0 and attracting -> infinity
    frame = np.array([[cr[1], -cr[0]], [ca[1], -ca[0]]])
    if np.linalg.det(frame) < 0:
        frame[0] *= -1.0
    ha, hr = axis_endpoints(word_matrix(rep, h_word))
    mats = frame @ ball(rep, n)
    pa = mats @ ha
    pr = mats @ hr
    x = pa[:, 0] / pa[:, 1]
    y = pr[:, 0] / pr[:, 1]
    prod = x * y
    # translates sharing an endpoint with axis(c) do not cross it
    na = np.hypot(pa[:, 0], pa[:, 1])
    nr = np.hypot(pr[:, 0], pr[:, 1])
    clear = ((np.abs(pa[:, 0]) > 1e-9 * na) & (np.abs(pa[:, 1]) > 1e-9 * na)
             & (np.abs(pr[:, 0]) > 1e-9 * nr) & (np.abs(pr[:, 1]) > 1e-9 * nr))
    linked = (prod < 0) & clear
    t = np.full(len(x), np.nan)
    t[linked] = 0.5 * np.log(-prod[linked])
    inside = linked & (t >= start) & (t < start + length)
    ends = sorted(zip(np.arctan(x[inside]).tolist(), np.arctan(y[inside]).tolist()))
    distinct: list[tuple[float, float]] = []
    for a, b in ends:
        if not any(abs(a - p) < 1e-6 and abs(b - q) < 1e-6 for p, q in distinct[-50:]):
            distinct.append((a, b))
    return len(distinct)
