# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot loops in ``_kernels_py``; same signatures and results."""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, hypot, log, sqrt, asinh, acosh, exp

cnp.import_array()


cdef inline bint _classify(double a, double b, double c, double d,
                           double p1, double q1, double p2, double q2,
                           double shared_tol, double* x, double* y) noexcept nogil:
    cdef double P1 = a * p1 + b * q1
    cdef double Q1 = c * p1 + d * q1
    cdef double P2 = a * p2 + b * q2
    cdef double Q2 = c * p2 + d * q2
    cdef double n1 = hypot(P1, Q1)
    cdef double n2 = hypot(P2, Q2)
    if fabs(P1) < shared_tol * n1 or fabs(Q1) < shared_tol * n1:
        return False
    if fabs(P2) < shared_tol * n2 or fabs(Q2) < shared_tol * n2:
        return False
    x[0] = P1 / Q1
    y[0] = P2 / Q2
    return x[0] * y[0] < 0.0


def scan_crossings(mats, arcs, double lo, double hi, double shared_tol):
    cdef double[:, ::1] M = np.ascontiguousarray(mats, dtype=np.float64)
    cdef double[:, ::1] A = np.ascontiguousarray(arcs, dtype=np.float64)
    cdef Py_ssize_t k = M.shape[0], m = A.shape[0], i, j, n = 0
    cdef double x = 0.0, y = 0.0, t
    # first pass counts hits so the outputs can be allocated exactly
    with nogil:
        for i in range(k):
            for j in range(m):
                if _classify(M[i, 0], M[i, 1], M[i, 2], M[i, 3],
                             A[j, 0], A[j, 1], A[j, 2], A[j, 3], shared_tol, &x, &y):
                    t = 0.5 * log(-(x * y))
                    if t >= lo and t < hi:
                        n += 1
    oi = np.empty(n, dtype=np.int64)
    oj = np.empty(n, dtype=np.int64)
    ot = np.empty(n, dtype=np.float64)
    ox = np.empty(n, dtype=np.float64)
    oy = np.empty(n, dtype=np.float64)
    cdef long long[::1] vi = oi
    cdef long long[::1] vj = oj
    cdef double[::1] vt = ot
    cdef double[::1] vx = ox
    cdef double[::1] vy = oy
    cdef Py_ssize_t f = 0
    with nogil:
        for i in range(k):
            for j in range(m):
                if _classify(M[i, 0], M[i, 1], M[i, 2], M[i, 3],
                             A[j, 0], A[j, 1], A[j, 2], A[j, 3], shared_tol, &x, &y):
                    t = 0.5 * log(-(x * y))
                    if t >= lo and t < hi:
                        vi[f] = i
                        vj[f] = j
                        vt[f] = t
                        vx[f] = x
                        vy[f] = y
                        f += 1
    return oi, oj, ot, ox, oy


cdef inline double _dist_to_imag_point(double wr, double wi, double h) noexcept nogil:
    # distance from w to i*h
    return 2.0 * asinh(hypot(wr, wi - h) / (2.0 * sqrt(wi * h)))


def path_distance(zre, zim, frames, lengths):
    cdef double[::1] xr = np.ascontiguousarray(zre, dtype=np.float64)
    cdef double[::1] xi = np.ascontiguousarray(zim, dtype=np.float64)
    cdef double[:, ::1] F = np.ascontiguousarray(frames, dtype=np.float64)
    cdef double[::1] L = np.ascontiguousarray(lengths, dtype=np.float64)
    cdef Py_ssize_t n = xr.shape[0], s = F.shape[0], i, k
    out = np.full(n, np.inf)
    cdef double[::1] o = out
    cdef double a, b, c, d, nr, ni, dr, di, den, wr, wi, r, t, dist, ratio
    with nogil:
        for i in range(n):
            for k in range(s):
                a = F[k, 0]; b = F[k, 1]; c = F[k, 2]; d = F[k, 3]
                nr = a * xr[i] + b
                ni = a * xi[i]
                dr = c * xr[i] + d
                di = c * xi[i]
                den = dr * dr + di * di
                wr = (nr * dr + ni * di) / den
                wi = (ni * dr - nr * di) / den
                r = hypot(wr, wi)
                t = log(r)
                if t < 0.0:
                    dist = _dist_to_imag_point(wr, wi, 1.0)
                elif t > L[k]:
                    dist = _dist_to_imag_point(wr, wi, exp(L[k]))
                else:
                    ratio = r / wi
                    dist = acosh(ratio if ratio > 1.0 else 1.0)
                if dist < o[i]:
                    o[i] = dist
    return out
