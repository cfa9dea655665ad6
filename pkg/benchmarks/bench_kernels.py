"""Compare the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py --q 2 5 8 --repeat 3
"""

from __future__ import annotations

import argparse
import json
import time

import numpy as np

from clforge.construction import all_points, build_D, build_M
from clforge.field import create_field_ctx
from clforge.kernels import BACKENDS, perp_counts, trace_histograms

FIELDS = {2: (2, 1), 5: (5, 1), 8: (2, 3), 11: (11, 1), 17: (17, 1)}


def best_of(fn, repeat: int) -> tuple[float, object]:
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def bench(q: int, repeat: int, threads: int, n_pairs: int) -> list[dict]:
    ctx = create_field_ctx(*FIELDS[q])
    lc = build_M(ctx)
    pxi, peta = all_points(ctx)
    X, Y = build_D(lc)
    rng = np.random.default_rng(0)
    a = rng.integers(0, ctx.q3, size=n_pairs)
    b = rng.integers(0, ctx.q3, size=n_pairs)
    rows = []
    ref = {}
    for backend in BACKENDS:
        for kernel, fn, work in (
            ("perp_counts", lambda: perp_counts(ctx, pxi, peta, lc.xi, lc.eta, threads=threads, backend=backend),
             len(pxi) * len(lc)),
            ("trace_histograms", lambda: trace_histograms(ctx, a, b, X, Y, threads=threads, backend=backend),
             n_pairs * len(X)),
        ):
            if backend == "numpy" and work > 3e8:
                rows.append({"q": q, "kernel": kernel, "backend": backend, "seconds": None, "skipped": True})
                continue
            sec, out = best_of(fn, repeat)
            if kernel in ref:
                assert np.array_equal(ref[kernel], out), f"{kernel} backends disagree at q={q}"
            ref[kernel] = out
            rows.append({
                "q": q,
                "kernel": kernel,
                "backend": backend,
                "seconds": round(sec, 4),
                "evals_per_sec": round(work / sec) if sec > 0 else None,
            })
    return rows


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--q", type=int, nargs="+", default=[2, 5, 8])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--pairs", type=int, default=2000)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()

    rows = []
    for q in args.q:
        rows += bench(q, args.repeat, args.threads, args.pairs)
    if args.json:
        print(json.dumps(rows, indent=1))
        return
    print(f"{'q':>3} {'kernel':<17} {'backend':<7} {'seconds':>9} {'evals/s':>12}")
    for r in rows:
        sec = "skipped" if r.get("skipped") else f"{r['seconds']:.4f}"
        rate = r.get("evals_per_sec") or ""
        print(f"{r['q']:>3} {r['kernel']:<17} {r['backend']:<7} {sec:>9} {rate:>12}")


if __name__ == "__main__":
    main()
