"""Pure numpy versions of the compiled kernels in ``_kernels.pyx``."""

from __future__ import annotations

import numpy as np

_BLOCK = 1 << 22  # elements per broadcast block


def _mul(a, b, order):
    r = a + b
    r = np.where(r >= order, r - order, r)
    return np.where((a == order) | (b == order), order, r)


def _add(a, b, zech, order):
    d = b - a
    d = np.where(d < 0, d + order, d)
    z = zech[d].astype(np.int64)
    r = a + z
    r = np.where(r >= order, r - order, r)
    r = np.where(z == order, order, r)
    r = np.where(a == order, b, r)
    return np.where(b == order, a, r)


def perp_counts(pxi, peta, mxi, meta, zech, trace_zero, order, nthreads=1):
    n_p, n_m = len(pxi), len(mxi)
    out = np.zeros(n_p, dtype=np.int64)
    step = max(1, _BLOCK // max(n_m, 1))
    for start in range(0, n_p, step):
        sl = slice(start, start + step)
        a = _mul(pxi[sl, None], meta[None, :], order)
        b = _mul(peta[sl, None], mxi[None, :], order)
        s = _add(a, b, zech, order)
        out[sl] = trace_zero[s].sum(axis=1)
    return out


def trace_histograms(a, b, x, y, zech, abs_trace, order, p, nthreads=1):
    n_pairs, n = len(a), len(x)
    out = np.zeros((n_pairs, p), dtype=np.int64)
    step = max(1, _BLOCK // max(n, 1))
    for start in range(0, n_pairs, step):
        sl = slice(start, start + step)
        u = _mul(b[sl, None], x[None, :], order)
        v = _mul(a[sl, None], y[None, :], order)
        t = abs_trace[_add(u, v, zech, order)]
        rows = np.repeat(np.arange(t.shape[0]), t.shape[1])
        np.add.at(out[sl], (rows, t.ravel()), 1)
    return out
