"""Backend selection for the hot loops.

The compiled extension is used when it imports; setting
``CLFORGE_PURE_PYTHON=1`` forces the numpy fallback.
"""

from __future__ import annotations

import os

import numpy as np

from clforge import _fallback
from clforge.field import FieldCtx

try:
    if os.environ.get("CLFORGE_PURE_PYTHON"):
        raise ImportError("pure python requested")
    from clforge import _kernels as _compiled
except ImportError:
    _compiled = None

BACKENDS = {"numpy": _fallback}
if _compiled is not None:
    BACKENDS["cython"] = _compiled
BACKEND = "cython" if _compiled is not None else "numpy"


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get("CLFORGE_THREADS", "1")))
    except ValueError:
        return 1


def _impl(backend: str | None):
    return BACKENDS[backend or BACKEND]


def _i64(a) -> np.ndarray:
    return np.ascontiguousarray(a, dtype=np.int64)


def perp_counts(ctx: FieldCtx, pxi, peta, mxi, meta, threads: int | None = None, backend: str | None = None) -> np.ndarray:
    """|P^perp cap M| for every point P given by (pxi, peta)."""
    return _impl(backend).perp_counts(
        _i64(pxi), _i64(peta), _i64(mxi), _i64(meta),
        ctx.zech, ctx.trace_zero, ctx.order, threads or default_threads(),
    )


def trace_histograms(ctx: FieldCtx, a, b, x, y, threads: int | None = None, backend: str | None = None) -> np.ndarray:
    """Histogram (rows: pairs (a, b); columns: t in F_p) of Tr(b x + a y) over (x, y)."""
    return _impl(backend).trace_histograms(
        _i64(a), _i64(b), _i64(x), _i64(y),
        ctx.zech, ctx.abs_trace, ctx.order, ctx.p, threads or default_threads(),
    )
