"""Exact verification suites for the construction.

Every check returns a :class:`Report`.  Character sums are evaluated with
integer trace histograms only; no floating point is involved here.
"""

from __future__ import annotations

import math
import time
from collections import Counter
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from clforge import quadric as qd
from clforge.construction import (
    LineClassModel,
    all_points,
    beta_gamma,
    build_D,
    c_alpha,
    canonical_points,
    multiset_Wx,
    mu_counts,
    point_keys,
    verify_keyodd_identity,
)
from clforge.errors import TooLarge
from clforge.field import FieldCtx
from clforge.kernels import perp_counts, trace_histograms

MAX_VIOLATORS = 100
GENERATOR_MAX_Q = 5


@dataclass
class Report:
    check: str
    q: int
    p: int
    n: int
    params: dict[str, Any] = field(default_factory=dict)
    stats: dict[str, Any] = field(default_factory=dict)
    violators: list[Any] = field(default_factory=list)
    violations: int = 0
    elapsed_ms: float = 0.0

    @classmethod
    def for_ctx(cls, check: str, ctx: FieldCtx, **params) -> "Report":
        return cls(check, ctx.q, ctx.p, ctx.n, params=dict(params))

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def fail(self, what: str, **detail) -> None:
        self.violations += 1
        if len(self.violators) < MAX_VIOLATORS:
            self.violators.append({"what": what, **{k: _plain(v) for k, v in detail.items()}})

    def expect(self, cond: bool, what: str, **detail) -> bool:
        if not cond:
            self.fail(what, **detail)
        return bool(cond)

    def to_dict(self, deterministic: bool = False) -> dict:
        params = dict(self.params)
        params["stats"] = _plain(self.stats)
        params["violators"] = self.violators
        return {
            "check": self.check,
            "q": self.q,
            "p": self.p,
            "n": self.n,
            "pass": self.passed,
            "violations": self.violations,
            "elapsed_ms": 0 if deterministic else round(self.elapsed_ms, 3),
            "params": _plain(params),
        }

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.check} q={self.q} violations={self.violations} ({self.elapsed_ms:.0f} ms)"


def _plain(obj):
    """Convert numpy scalars and containers to JSON-friendly values."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [_plain(v) for v in items]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


@contextmanager
def timed(report: Report):
    t0 = time.perf_counter()
    try:
        yield report
    finally:
        report.elapsed_ms = (time.perf_counter() - t0) * 1e3


def _logset(a) -> set[int]:
    return set(np.asarray(a, dtype=np.int64).ravel().tolist())


# --- construction ----------------------------------------------------------


def verify_construction(lc: LineClassModel) -> Report:
    """Sizes of T0, L0, L_x, E, M, D and the multiset identity D1 + D2 = 3E + T0."""
    cm = lc.construction
    ctx = cm.ctx
    q, N, x = ctx.q, ctx.N, cm.x_param
    rep = Report.for_ctx("construction", ctx)
    with timed(rep):
        rep.expect(len(cm.T0) == q * q - 1, "|T0|", got=len(cm.T0))
        rep.expect(len(cm.L0) == q + 1, "|L0|", got=len(cm.L0))
        for xv, La in cm.Lx.items():
            rep.expect(len(La) == (q + 1) // 3, "|L_x|", x=xv, got=len(La))
        rep.expect(len(cm.E) == x, "|E|", got=len(cm.E))
        rep.expect(_logset(cm.E) <= _logset(cm.T0), "E not inside T0")
        rep.expect(len(lc) == x * N, "|M|", got=len(lc))
        X, _ = build_D(lc)
        rep.expect(len(X) == (ctx.q3 - 1) * x, "|D|", got=len(X))
        cosets = (cm.L0[:, None] + ctx.fq_star[None, :]) % ctx.order
        rep.expect(_logset(cosets) == _logset(cm.T0) and cosets.size == len(cm.T0), "L0 * F_q^* != T0")
        rep.expect(verify_keyodd_identity(ctx, cm), "D1 + D2 != 3E + T0")
        if ctx.p == 2:
            rep.expect(cm.beta == 0 and cm.gamma == 0, "beta = gamma = 1 for even q")
        # sum over theta in F_q^* of mu_{x0 theta} is q
        for x0 in cm.L0.tolist():
            tot = sum(mu_counts(ctx, ctx.mul(x0, int(t)), cm.beta)[0] for t in ctx.fq_star)
            rep.expect(tot == q, "sum of mu over a coset", x0=x0, got=tot)
        rep.stats = {"x": x, "T0": len(cm.T0), "L0": len(cm.L0), "E": len(cm.E), "M": len(lc)}
    return rep


# --- tight set -----------------------------------------------------------------


def verify_tight_set(lc: LineClassModel, threads: int | None = None, backend: str | None = None) -> Report:
    """|P^perp cap M| over every point P of PG(5, q)."""
    ctx = lc.ctx
    q, x = ctx.q, lc.x_param
    rep = Report.for_ctx("tight", ctx, threads=threads, backend=backend)
    with timed(rep):
        pxi, peta = all_points(ctx)
        counts = perp_counts(ctx, pxi, peta, lc.xi, lc.eta, threads=threads, backend=backend)
        member = lc.contains(pxi, peta)
        expected = np.where(member, x * (q + 1) + q * q, x * (q + 1))
        bad = np.flatnonzero(counts != expected)
        for i in bad[:MAX_VIOLATORS]:
            rep.fail("perp count", xi=pxi[i], eta=peta[i], got=counts[i], expected=expected[i])
        rep.violations = int(bad.size)
        # double count over quadric points: sum_P |P^perp cap M| = |M| * |R^perp cap quadric|
        on_quadric = ctx.trace_zero[ctx.vmul(pxi, peta)] == 1
        lhs = int(counts[on_quadric].sum())
        qxi, qeta = pxi[on_quadric], peta[on_quadric]
        tangent = int(perp_counts(ctx, lc.xi[:1], lc.eta[:1], qxi, qeta, backend=backend)[0])
        rep.expect(lhs == len(lc) * tangent, "double count", lhs=lhs, rhs=len(lc) * tangent)
        rep.stats = {
            "points": int(len(pxi)),
            "values": dict(Counter(counts.tolist())),
            "members_seen": int(member.sum()),
            "tangent_points": tangent,
        }
    return rep


# --- character values ---------------------------------------------------------------


def _nonzero_vectors(ctx: FieldCtx) -> tuple[np.ndarray, np.ndarray]:
    a = np.repeat(np.arange(ctx.q3, dtype=np.int64), ctx.q3)
    b = np.tile(np.arange(ctx.q3, dtype=np.int64), ctx.q3)
    keep = ~((a == ctx.zero) & (b == ctx.zero))
    return a[keep], b[keep]


def char_values(ctx: FieldCtx, a, b, X, Y, threads: int | None = None, backend: str | None = None):
    """(value, rational) of psi_{a,b} summed over the vectors (X, Y)."""
    hist = trace_histograms(ctx, a, b, X, Y, threads=threads, backend=backend)
    rational = (hist[:, 1:] == hist[:, 1:2]).all(axis=1) if ctx.p > 1 else np.ones(len(hist), bool)
    return hist[:, 0] - hist[:, 1], rational, hist


def verify_char_values_exact(
    lc: LineClassModel,
    sample: int | str | None = None,
    seed: int = 0,
    threads: int | None = None,
    backend: str | None = None,
) -> Report:
    """psi_{a,b}(D) in {-x, q^3 - x} with membership match, by exact histograms.

    ``sample="exhaustive"`` (the default for q <= 5) covers every nonzero
    (a, b); otherwise ``sample`` random nonzero vectors plus every vector of D.
    """
    ctx = lc.ctx
    q3, x = ctx.q3, lc.x_param
    if sample is None:
        sample = "exhaustive" if ctx.q <= 5 else 10_000
    rep = Report.for_ctx("charsum", ctx, sample=sample, seed=seed)
    with timed(rep):
        X, Y = build_D(lc)
        if sample == "exhaustive":
            a, b = _nonzero_vectors(ctx)
        else:
            rng = np.random.default_rng(seed)
            ra = rng.integers(0, q3, size=int(sample))
            rb = rng.integers(0, q3, size=int(sample))
            zero = (ra == ctx.zero) & (rb == ctx.zero)
            rb[zero] = 0
            a = np.concatenate([ra, X])
            b = np.concatenate([rb, Y])
        vals, rational, _ = char_values(ctx, a, b, X, Y, threads=threads, backend=backend)
        member = lc.contains(a, b)
        expected = np.where(member, q3 - x, -x)
        for i in np.flatnonzero(~rational)[:MAX_VIOLATORS]:
            rep.fail("irrational character value", a=a[i], b=b[i])
        for i in np.flatnonzero(rational & (vals != expected))[:MAX_VIOLATORS]:
            rep.fail("character value", a=a[i], b=b[i], got=vals[i], expected=expected[i])
        rep.violations = int((~rational).sum() + (rational & (vals != expected)).sum())

        # psi = q |P^perp cap M| - |M| ties the histogram side to the incidence side
        cxi, ceta = canonical_points(ctx, a, b)
        perp = perp_counts(ctx, cxi, ceta, lc.xi, lc.eta, threads=threads, backend=backend)
        tie = vals != ctx.q * perp - len(lc)
        for i in np.flatnonzero(tie)[: MAX_VIOLATORS - len(rep.violators)]:
            rep.fail("psi vs perp count", a=a[i], b=b[i])
        rep.violations += int(tie.sum())

        ab0 = (a == ctx.zero) | (b == ctx.zero)
        bad_ab0 = int((vals[ab0] != -x).sum())
        if bad_ab0:
            rep.fail("ab = 0 value", count=bad_ab0)
        rep.stats = {
            "pairs": int(len(a)),
            "values": dict(Counter(vals.tolist())),
            "ab_zero_pairs": int(ab0.sum()),
            "members": int(member.sum()),
        }
    return rep


# --- spreads -------------------------------------------------------------------------


def verify_spreads(lc: LineClassModel, n_random: int = 100, seed: int = 0) -> Report:
    """|L cap S| = x for the regular spread and random projective images of it."""
    ctx = lc.ctx
    fq = ctx.small
    q, x = ctx.q, lc.x_param
    rep = Report.for_ctx("spreads", ctx, n_random=n_random, seed=seed)
    with timed(rep):
        member = np.sort(qd.plucker_keys(fq, qd.line_class_plucker(lc)))
        qxi, qeta = qd.enumerate_quadric_points(ctx)
        every = qd.plucker_keys(fq, qd.to_plucker(ctx, qxi, qeta))
        complement = np.setdiff1d(every, member)
        rng = np.random.default_rng(seed)
        regular = qd.regular_spread(ctx)
        hits = Counter()
        for k in range(n_random + 1):
            spread = regular
            if k:
                spread = qd.apply_projectivity(fq, qd.random_projectivity(fq, rng), regular)
            if not rep.expect(qd.is_spread(fq, spread), "not a spread", index=k):
                continue
            keys = qd.spread_plucker_keys(fq, spread)
            inside = int(np.isin(keys, member).sum())
            outside = int(np.isin(keys, complement).sum())
            hits[inside] += 1
            rep.expect(inside == x, "|L cap S|", index=k, got=inside)
            rep.expect(outside == q * q + 1 - x, "|complement cap S|", index=k, got=outside)
        rep.stats = {"spreads": n_random + 1, "values": dict(hits)}
    return rep


# --- stabiliser ----------------------------------------------------------------------------------


def expected_s(q: int) -> int:
    return 1 if q % 2 == 0 else math.gcd(2, (q - 1) // 2)


def kappa_set(lc: LineClassModel) -> list[int]:
    """Logs of the squares a of F_q^* with a^2 E = E."""
    cm = lc.construction
    ctx = cm.ctx
    E = _logset(cm.E)
    squares = sorted({(2 * int(s)) % ctx.order for s in ctx.fq_star})
    return [a for a in squares if {(2 * a + e) % ctx.order for e in E} == E]


def verify_section5(lc: LineClassModel, generators: bool | None = None, max_gen_q: int = GENERATOR_MAX_Q) -> Report:
    cm = lc.construction
    ctx = cm.ctx
    q, N, order = ctx.q, ctx.N, ctx.order
    fq = ctx.small
    if generators is None:
        generators = q <= max_gen_q
    rep = Report.for_ctx("section5", ctx, generators=generators)
    with timed(rep):
        E = _logset(cm.E)
        # F_q^* E = W \ {0}
        scaled = _logset((cm.E[:, None] + ctx.fq_star[None, :]) % order)
        rep.expect(scaled == _logset(cm.T0), "F_q^* E != W \\ {0}")

        # B_u
        fq_star = _logset(ctx.fq_star)
        sizes = []
        for u in cm.L0.tolist():
            B = set()
            for y in cm.L0.tolist():
                if y == u:
                    continue
                t = ctx.sub(ctx.mul(ctx.frob(y, 2), ctx.frob(u, 1)), ctx.mul(ctx.frob(y, 1), ctx.frob(u, 2)))
                rep.expect(t in fq_star, "B_u element outside F_q^*", u=u, y=y)
                B.add(t)
            sizes.append(len(B))
            rep.expect(len(B) == 2 * (q + 1) // 3 - 1, "|B_u|", u=u, got=len(B))
            prod = {(b + c) % order for b in B for c in cm.Lx[u]}
            rep.expect(prod == fq_star, "B_u L_u != F_q^*", u=u)

        # Frobenius and the C0 action preserve M
        rep.expect({(e * q) % order for e in E} == E, "E^q != E")
        rep.expect(bool(lc.contains(ctx.vfrob(lc.xi), ctx.vfrob(lc.eta)).all()), "sigma(M) != M")
        g = q - 1
        rep.expect(bool(lc.contains(ctx.vmul(lc.xi, g), ctx.vmul(lc.eta, order - g)).all()), "C0 moves M")

        # kappa criterion
        ks = kappa_set(lc)
        direct = []
        for a in sorted({(2 * int(s)) % order for s in ctx.fq_star}):
            ok = lc.contains(ctx.vmul(lc.xi, a), ctx.vmul(lc.eta, (-a) % order)).all()
            if ok:
                direct.append(a)
        rep.expect(direct == ks, "kappa_a(M) = M disagrees with a^2 E = E", direct=direct, criterion=ks)
        want = {0} if expected_s(q) == 1 else {0, ctx.half}
        rep.expect(set(ks) == want, "kappa set", got=ks, expected=sorted(want))
        s = len(ks)
        rep.expect(s == expected_s(q), "s", got=s, expected=expected_s(q))

        # |L_x cap squares| for odd q
        if q % 2:
            sq = {(2 * int(t)) % order for t in ctx.fq_star}
            for xv, La in cm.Lx.items():
                k = len(sq.intersection(La))
                rep.expect(k == (q + 1) // 6, "|L_x cap squares|", x=xv, got=k)

        gen_stats = None
        if generators:
            gen_stats = _check_generators(lc, rep, max_gen_q)
        rep.stats = {
            "B_u_sizes": sorted(set(sizes)),
            "kappa_set_logs": ks,
            "s": s,
            "stabilizer_order": 3 * N * s,
            "generators": gen_stats,
        }
    return rep


def _check_generators(lc: LineClassModel, rep: Report, max_gen_q: int) -> dict:
    ctx = lc.ctx
    fq = ctx.small
    gens, pts = qd.enumerate_generators(ctx, max_q=max_gen_q)
    q = ctx.q
    rep.expect(len(gens) == 2 * (q + 1) * (q * q + 1), "generator count", got=len(gens))
    for g in gens:
        if len(g.points) != q * q + q + 1:
            rep.fail("generator size", size=len(g.points))
    member = qd.plucker_keys(fq, qd.line_class_plucker(lc))
    special = qd.special_generators(ctx, gens, pts)
    rep.expect(set(special) == {"U1", "U2"}, "U1/U2 not found")
    if set(special) == {"U1", "U2"}:
        rep.expect(special["U1"].cls != special["U2"].cls, "U1 and U2 in the same class")
    disjoint = [g for g in gens if not qd.generator_meets(g, pts, member, q)]
    ids = {g.points for g in disjoint}
    rep.expect(ids == {g.points for g in special.values()}, "generators disjoint from M", count=len(disjoint))
    return {"count": len(gens), "disjoint_from_M": len(disjoint), "classes": dict(Counter(g.cls for g in gens))}


# --- preliminaries --------------------------------------------------------------------------------


def cubic_root_count(fq, c: int, d: int) -> int:
    lam = np.arange(fq.q)
    cube = fq.mul[fq.mul[lam, lam], lam]
    vals = fq.add[fq.add[cube, fq.mul[c, lam]], d]
    return int((vals == 0).sum())


def cubic_discriminant(fq, c: int, d: int) -> int:
    c3 = fq.mul[fq.mul[c, c], c]
    t1 = fq.mul[fq.from_int(-4), c3]
    t2 = fq.mul[fq.from_int(-27), fq.mul[d, d]]
    return int(fq.add[t1, t2])


def predicts_one_root(fq, c: int, d: int) -> bool:
    if fq.p == 2:
        c3 = fq.mul[fq.mul[c, c], c]
        dinv = fq.inv[d]
        arg = fq.mul[c3, fq.mul[dinv, dinv]]
        return bool(fq.abs_trace[arg] != fq.abs_trace[1])
    return not bool(fq.squares[cubic_discriminant(fq, c, d)])


def verify_prelim_lemmas(lc: LineClassModel, n_cubics: int = 1000, seed: int = 0) -> Report:
    cm = lc.construction
    ctx = cm.ctx
    fq = ctx.small
    q = ctx.q
    rep = Report.for_ctx("prelims", ctx, n_cubics=n_cubics, seed=seed)
    with timed(rep):
        if q % 2:
            rep.expect(not fq.squares[fq.from_int(-3)], "-3 is a square")
        # Tr(z^{1+q}) != 0 on T0
        T0 = cm.T0
        tr = ctx.vtrace(ctx.vmul(T0, ctx.vfrob(T0)))
        for z in T0[tr == ctx.zero]:
            rep.fail("Tr(z^(1+q)) = 0", z=z)

        # c_alpha in {1, 4}, sum 2q, agreeing with the multiset W_x
        calpha_values = Counter()
        for xv in cm.L0.tolist():
            W = multiset_Wx(ctx, xv)
            cs = [c_alpha(ctx, xv, int(a)) for a in ctx.fq_star]
            calpha_values.update(cs)
            rep.expect(all(c in (1, 4) for c in cs), "c_alpha outside {1, 4}", x=xv, values=cs)
            rep.expect(sum(cs) == 2 * q, "sum of c_alpha", x=xv, got=sum(cs))
            rep.expect(cs == [W.get(int(a), 0) for a in ctx.fq_star], "c_alpha vs W_x", x=xv)

        # root count dichotomy for X^3 + cX + d
        rng = np.random.default_rng(seed)
        tested = 0
        counts = Counter()
        attempts = 0
        while tested < n_cubics and attempts < 50 * n_cubics:
            attempts += 1
            c, d = (int(v) for v in rng.integers(0, q, size=2))
            if cubic_discriminant(fq, c, d) == 0:
                continue
            tested += 1
            r = cubic_root_count(fq, c, d)
            counts[r] += 1
            rep.expect(r in (0, 1, 3), "root count", c=c, d=d, got=r)
            rep.expect((r == 1) == predicts_one_root(fq, c, d), "cubic dichotomy", c=c, d=d, roots=r)
        rep.stats = {
            "cubics": tested,
            "root_counts": dict(counts),
            "c_alpha_values": dict(calpha_values),
        }
    return rep


def run_checks(
    lc: LineClassModel,
    checks: list[str],
    *,
    sample: int | str | None = None,
    seed: int = 0,
    threads: int | None = None,
    n_random_spreads: int = 100,
    max_gen_q: int = GENERATOR_MAX_Q,
) -> list[Report]:
    out = []
    for name in checks:
        if name == "construction":
            out.append(verify_construction(lc))
        elif name == "tight":
            out.append(verify_tight_set(lc, threads=threads))
        elif name == "charsum":
            out.append(verify_char_values_exact(lc, sample=sample, seed=seed, threads=threads))
        elif name == "spreads":
            out.append(verify_spreads(lc, n_random=n_random_spreads, seed=seed))
        elif name == "section5":
            out.append(verify_section5(lc, generators=False))
        elif name == "generators":
            if lc.ctx.q > max_gen_q:
                raise TooLarge(f"generator enumeration is guarded at q <= {max_gen_q}")
            rep = Report.for_ctx("generators", lc.ctx)
            with timed(rep):
                rep.stats = _check_generators(lc, rep, max_gen_q)
            out.append(rep)
        elif name == "prelims":
            out.append(verify_prelim_lemmas(lc, seed=seed))
        else:
            raise ValueError(f"unknown check {name!r}")
    return out


__all__ = [
    "Report",
    "beta_gamma",
    "char_values",
    "expected_s",
    "kappa_set",
    "point_keys",
    "run_checks",
    "verify_char_values_exact",
    "verify_construction",
    "verify_prelim_lemmas",
    "verify_section5",
    "verify_spreads",
    "verify_tight_set",
]
