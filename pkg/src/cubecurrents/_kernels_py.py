"""Numpy implementations of the hot loops; used when the compiled module is absent."""

from __future__ import annotations

import numpy as np

CHUNK = 1 << 20  # pair budget per vectorized block


def scan_crossings(mats: np.ndarray, arcs: np.ndarray, lo: float, hi: float, shared_tol: float):
    """Find tile/arc pairs whose image axis crosses the imaginary axis in [lo, hi).

    ``mats`` holds one framed tile matrix (a, b, c, d) per row; ``arcs`` holds
    the homogeneous endpoints (p1, q1, p2, q2) of each arc.  Returns tile
    indices, arc indices, crossing parameters and the two image endpoints in
    frame coordinates.
    """
    mats = np.ascontiguousarray(mats, dtype=np.float64)
    arcs = np.ascontiguousarray(arcs, dtype=np.float64)
    k, m = len(mats), len(arcs)
    out_i, out_j, out_t, out_x, out_y = [], [], [], [], []
    if k == 0 or m == 0:
        empty = np.empty(0)
        return empty.astype(np.int64), empty.astype(np.int64), empty, empty, empty
    step = max(1, CHUNK // m)
    p1, q1, p2, q2 = arcs[:, 0], arcs[:, 1], arcs[:, 2], arcs[:, 3]
    for s in range(0, k, step):
        blk = mats[s:s + step]
        a, b, c, d = (blk[:, i:i + 1] for i in range(4))
        P1 = a * p1 + b * q1
        Q1 = c * p1 + d * q1
        P2 = a * p2 + b * q2
        Q2 = c * p2 + d * q2
        n1 = np.hypot(P1, Q1)
        n2 = np.hypot(P2, Q2)
        shared = ((np.abs(P1) < shared_tol * n1) | (np.abs(Q1) < shared_tol * n1)
                  | (np.abs(P2) < shared_tol * n2) | (np.abs(Q2) < shared_tol * n2))
        x = np.divide(P1, Q1, out=np.zeros_like(P1), where=~shared)
        y = np.divide(P2, Q2, out=np.zeros_like(P2), where=~shared)
        prod = x * y
        linked = (~shared) & (prod < 0.0)
        t = np.full_like(prod, np.nan)
        t[linked] = 0.5 * np.log(-prod[linked])
        hit = linked & (t >= lo) & (t < hi)
        ii, jj = np.nonzero(hit)
        out_i.append(ii + s)
        out_j.append(jj)
        out_t.append(t[ii, jj])
        out_x.append(x[ii, jj])
        out_y.append(y[ii, jj])
    return (np.concatenate(out_i).astype(np.int64), np.concatenate(out_j).astype(np.int64),
            np.concatenate(out_t), np.concatenate(out_x), np.concatenate(out_y))


def path_distance(zre: np.ndarray, zim: np.ndarray, frames: np.ndarray, lengths: np.ndarray) -> np.ndarray:
    """Distance from each point to the union of framed geodesic segments."""
    zre = np.asarray(zre, dtype=np.float64)
    zim = np.asarray(zim, dtype=np.float64)
    best = np.full(zre.shape, np.inf)
    z = zre + 1j * zim
    for (a, b, c, d), length in zip(frames, lengths):
        w = (a * z + b) / (c * z + d)
        r = np.abs(w)
        t = np.log(r)
        inside = np.arccosh(np.maximum(1.0, r / w.imag))
        # endpoint distances via the half-plane formula
        e0 = 2.0 * np.arcsinh(np.abs(w - 1j) / (2.0 * np.sqrt(w.imag)))
        top = np.exp(length)
        e1 = 2.0 * np.arcsinh(np.abs(w - 1j * top) / (2.0 * np.sqrt(w.imag * top)))
        dist = np.where(t < 0.0, e0, np.where(t > length, e1, inside))
        best = np.minimum(best, dist)
    return best
