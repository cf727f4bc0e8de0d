# cython: boundscheck=False, wraparound=False, cdivision=True
# cython: language_level=3
"""Compiled kernel: smallest singular value of each column-subset submatrix.

One-sided Jacobi orthogonalization on the gathered columns; accurate for the
small (width <= ~10) submatrices the certificate computations enumerate, and
free of per-call LAPACK dispatch overhead.
"""

from libc.math cimport fabs, sqrt
from libc.stdlib cimport free, malloc

import numpy as np

DEF MAX_SWEEPS = 64
DEF ORTHO_EPS = 1e-15


cdef double _min_sv_jacobi(double* w, Py_ssize_t n, Py_ssize_t s) noexcept nogil:
    """Smallest singular value of the n x s column-major block at ``w``.

    Rotates column pairs until mutually orthogonal; singular values are then
    the column norms. Rank-deficient blocks (including s > n) converge to
    zero columns, so the minimum comes out zero as it should.
    """
    cdef Py_ssize_t p, q, i, sweep
    cdef double app, aqq, apq, zeta, t, cs, sn, wp, wq, best
    cdef bint rotated
    if s == 1:
        app = 0.0
        for i in range(n):
            app += w[i] * w[i]
        return sqrt(app)
    for sweep in range(MAX_SWEEPS):
        rotated = False
        for p in range(s - 1):
            for q in range(p + 1, s):
                app = 0.0
                aqq = 0.0
                apq = 0.0
                for i in range(n):
                    wp = w[p * n + i]
                    wq = w[q * n + i]
                    app += wp * wp
                    aqq += wq * wq
                    apq += wp * wq
                if apq == 0.0:
                    continue
                if fabs(apq) <= ORTHO_EPS * sqrt(app) * sqrt(aqq):
                    continue
                rotated = True
                zeta = (aqq - app) / (2.0 * apq)
                if zeta >= 0.0:
                    t = 1.0 / (zeta + sqrt(1.0 + zeta * zeta))
                else:
                    t = -1.0 / (-zeta + sqrt(1.0 + zeta * zeta))
                cs = 1.0 / sqrt(1.0 + t * t)
                sn = cs * t
                for i in range(n):
                    wp = w[p * n + i]
                    wq = w[q * n + i]
                    w[p * n + i] = cs * wp - sn * wq
                    w[q * n + i] = sn * wp + cs * wq
        if not rotated:
            break
    best = -1.0
    for p in range(s):
        app = 0.0
        for i in range(n):
            wp = w[p * n + i]
            app += wp * wp
        if best < 0.0 or app < best:
            best = app
    return sqrt(best)


def edge_min_singular_values(double[:, ::1] mat, long long[::1] indices,
                             long long[::1] offsets):
    """Smallest singular value of ``mat[:, S]`` for each flattened edge S.

    Edge e covers column indices ``indices[offsets[e]:offsets[e+1]]``.
    """
    cdef Py_ssize_t n = mat.shape[0]
    cdef Py_ssize_t n_edges = offsets.shape[0] - 1
    cdef Py_ssize_t e, i, j, width, base, max_width = 0
    out_arr = np.empty(n_edges, dtype=np.float64)
    cdef double[::1] out = out_arr
    for e in range(n_edges):
        width = offsets[e + 1] - offsets[e]
        if width > max_width:
            max_width = width
    if max_width == 0:
        out_arr.fill(0.0)
        return out_arr
    cdef double* work = <double*> malloc(n * max_width * sizeof(double))
    if work == NULL:
        raise MemoryError()
    try:
        with nogil:
            for e in range(n_edges):
                base = offsets[e]
                width = offsets[e + 1] - base
                if width == 0:
                    out[e] = 0.0
                    continue
                for j in range(width):
                    for i in range(n):
                        work[j * n + i] = mat[i, indices[base + j]]
                out[e] = _min_sv_jacobi(work, n, width)
    finally:
        free(work)
    return out_arr
