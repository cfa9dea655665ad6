# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops over Zech-logarithm tables.

Same contracts as ``clforge._fallback``; logs are int64, the zero element is
the sentinel ``order``.
"""

import numpy as np
cimport numpy as cnp
from cython.parallel cimport prange

ctypedef long long i64
ctypedef int i32


cdef inline i64 _mul(i64 a, i64 b, i64 order) noexcept nogil:
    cdef i64 r
    if a == order or b == order:
        return order
    r = a + b
    if r >= order:
        r -= order
    return r


cdef inline i64 _add(i64 a, i64 b, const i32[::1] zech, i64 order) noexcept nogil:
    cdef i64 d, z, r
    if a == order:
        return b
    if b == order:
        return a
    d = b - a
    if d < 0:
        d += order
    z = zech[d]
    if z == order:
        return order
    r = a + z
    if r >= order:
        r -= order
    return r


def perp_counts(const i64[::1] pxi, const i64[::1] peta,
                const i64[::1] mxi, const i64[::1] meta,
                const i32[::1] zech, const cnp.uint8_t[::1] trace_zero,
                i64 order, int nthreads=1):
    """For each point P = (pxi, peta): #{X in M : Tr(xi_P eta_X + eta_P xi_X) = 0}."""
    cdef Py_ssize_t n_p = pxi.shape[0]
    cdef Py_ssize_t n_m = mxi.shape[0]
    out = np.zeros(n_p, dtype=np.int64)
    cdef i64[::1] res = out
    cdef Py_ssize_t i, j
    cdef i64 a, b, s, cnt
    for i in prange(n_p, nogil=True, num_threads=nthreads, schedule="static"):
        cnt = 0
        for j in range(n_m):
            a = _mul(pxi[i], meta[j], order)
            b = _mul(peta[i], mxi[j], order)
            s = _add(a, b, zech, order)
            cnt = cnt + trace_zero[s]
        res[i] = cnt
    return out


def trace_histograms(const i64[::1] a, const i64[::1] b,
                     const i64[::1] x, const i64[::1] y,
                     const i32[::1] zech, const i32[::1] abs_trace,
                     i64 order, int p, int nthreads=1):
    """Row k: histogram over t in F_p of Tr_{q^3/p}(b_k x + a_k y), (x, y) ranging over the input."""
    cdef Py_ssize_t n_pairs = a.shape[0]
    cdef Py_ssize_t n = x.shape[0]
    out = np.zeros((n_pairs, p), dtype=np.int64)
    cdef i64[:, ::1] res = out
    cdef Py_ssize_t k, j
    cdef i64 u, v, s
    for k in prange(n_pairs, nogil=True, num_threads=nthreads, schedule="static"):
        for j in range(n):
            u = _mul(b[k], x[j], order)
            v = _mul(a[k], y[j], order)
            s = _add(u, v, zech, order)
            res[k, abs_trace[s]] += 1
    return out
