"""Floating-point cross-checks of the Gauss sum identities behind the construction.

Characters of F_{q^3}^* are indexed by k in [0, q^3 - 2] with
chi^k(w^j) = exp(2 pi i k j / (q^3 - 1)); chi_1 = chi^(q-1) and chi_2 = chi^N.
Characters of F_q^* are indexed by k mod q-1 on the generator w^N.

Quantities with an exact counterpart (character sums of sets and
multisets, psi(zD_3), psi_{a,b}(D)) are computed exactly from integer
histograms and compared with the float side.
"""

from __future__ import annotations

from functools import cached_property

import numpy as np

from clforge.construction import (
    LineClassModel,
    build_D,
    keyodd_multisets,
    mu_counts,
)
from clforge.errors import TooLarge
from clforge.field import FieldCtx
from clforge.kernels import trace_histograms
from clforge.verification import Report, timed

TOL = 1e-5
DEFAULT_MAX_Q = 11


def tol(value) -> float:
    return TOL * max(1.0, float(np.max(np.abs(value))))


def close(a, b) -> bool:
    return bool(np.all(np.abs(np.asarray(a) - np.asarray(b)) <= tol(b)))


class GaussTables:
    """Gauss sums and character sums over a fixed FieldCtx."""

    def __init__(self, ctx: FieldCtx):
        self.ctx = ctx
        p = ctx.p
        self.zeta = np.exp(2j * np.pi * np.arange(p) / p)
        self.M = ctx.order

    # additive characters
    def psi(self, logs) -> np.ndarray:
        """Canonical additive character of F_{q^3} at w^log (zero sentinel allowed)."""
        return self.zeta[self.ctx.abs_trace[np.asarray(logs, dtype=np.int64)]]

    def psi_small(self, labels) -> np.ndarray:
        return self.zeta[self.ctx.small.abs_trace[np.asarray(labels, dtype=np.int64)]]

    def psi_value(self, hist) -> np.ndarray:
        """Evaluate sum_t n_t zeta^t for histogram rows."""
        return np.asarray(hist) @ self.zeta

    @cached_property
    def G(self) -> np.ndarray:
        """G(chi^k) for k in [0, q^3 - 2]."""
        return self.M * np.fft.ifft(self.psi(np.arange(self.M)))

    @cached_property
    def Gq(self) -> np.ndarray:
        """G_q(chi^k) for characters of F_q^*, k in [0, q - 2]."""
        ctx = self.ctx
        labels = ctx.small.vlabel(ctx.fq_star)
        return (ctx.q - 1) * np.fft.ifft(self.psi_small(labels))

    def gauss_direct(self, k: int) -> complex:
        j = np.arange(self.M)
        return complex(np.sum(self.psi(j) * np.exp(2j * np.pi * k * j / self.M)))

    def chi(self, k, logs) -> np.ndarray:
        logs = np.asarray(logs, dtype=np.int64)
        return np.exp(2j * np.pi * ((np.asarray(k) * logs) % self.M) / self.M)

    def char_sums(self, logs) -> np.ndarray:
        """chi^k(S) for every k, S a multiset of nonzero logs."""
        counts = np.bincount(np.asarray(logs, dtype=np.int64), minlength=self.M)
        return self.M * np.fft.ifft(counts)

    def char_sum_direct(self, k, logs) -> np.ndarray:
        k = np.atleast_1d(np.asarray(k, dtype=np.int64))
        return self.chi(k[:, None], np.asarray(logs)[None, :]).sum(axis=1)

    def psi_hist(self, logs) -> np.ndarray:
        """Exact histogram of Tr_{q^3/p} over a multiset of logs."""
        return np.bincount(self.ctx.abs_trace[np.asarray(logs, dtype=np.int64)], minlength=self.ctx.p)


def _guard(ctx: FieldCtx, force: bool, max_q: int = DEFAULT_MAX_Q) -> None:
    if ctx.q > max_q and not force:
        raise TooLarge(f"oracle is restricted to q <= {max_q}; pass force=True to override")


def _sample_logs(ctx: FieldCtx, rng, k: int) -> np.ndarray:
    if ctx.order <= k:
        return np.arange(ctx.order, dtype=np.int64)
    return np.sort(rng.choice(ctx.order, size=k, replace=False))


# --- Gauss sum basics ------------------------------------------------------


def check_gauss_properties(ctx: FieldCtx, gt: GaussTables | None = None) -> Report:
    gt = gt or GaussTables(ctx)
    rep = Report.for_ctx("oracle.gauss", ctx)
    with timed(rep):
        for name, G, size, gen_minus_one in (
            ("F_q^3", gt.G, ctx.q3, ctx.half),
            ("F_q", gt.Gq, ctx.q, ctx.half // ctx.N),
        ):
            m = len(G)
            k = np.arange(m)
            rep.expect(close(G[0], -1.0), "G(principal) != -1", field=name)
            if m > 1:
                mod2 = np.abs(G[1:]) ** 2
                bad = np.flatnonzero(np.abs(mod2 - size) > tol(size))
                for i in bad:
                    rep.fail("|G|^2 != field size", field=name, k=i + 1)
            chi_m1 = np.exp(2j * np.pi * ((k * gen_minus_one) % m) / m)
            lhs = G[(-k) % m]
            rhs = chi_m1 * np.conj(G)
            for i in np.flatnonzero(np.abs(lhs - rhs) > tol(size)):
                rep.fail("G(chi^-1) != chi(-1) conj G(chi)", field=name, k=i)
        # table vs direct summation
        rng = np.random.default_rng(0)
        for kk in _sample_logs(ctx, rng, 50):
            rep.expect(close(gt.gauss_direct(int(kk)), gt.G[kk]), "FFT table vs direct sum", k=kk)
        rep.stats = {"k_big": len(gt.G), "k_small": len(gt.Gq)}
    return rep


def check_orthogonality(ctx: FieldCtx, gt: GaussTables | None = None, n: int = 100, seed: int = 0) -> Report:
    """psi as a combination of multiplicative characters and the reverse."""
    gt = gt or GaussTables(ctx)
    rep = Report.for_ctx("oracle.orthogonality", ctx, n=n, seed=seed)
    rng = np.random.default_rng(seed)
    M = gt.M
    with timed(rep):
        ks = np.arange(M)
        for x in _sample_logs(ctx, rng, n):
            lhs = gt.psi([x])[0]
            rhs = np.sum(gt.G[(-ks) % M] * gt.chi(ks, x)) / M
            rep.expect(close(rhs, lhs), "psi expansion (F_q^3)", x=x)
        for _ in range(min(n, 50)):
            k = int(rng.integers(1, M))
            x = int(rng.integers(0, M))
            a = np.arange(M)
            inner = np.sum(gt.chi(-k, (ctx.half + a) % M) * gt.psi((a + x) % M))
            rhs = gt.G[k] * inner / ctx.q3
            rep.expect(close(rhs, gt.chi(k, x)), "chi expansion (F_q^3)", k=k, x=x)
        # the same on F_q
        m = ctx.q - 1
        fq = ctx.small
        for mm in range(m):
            lab = fq.label(int(ctx.fq_star[mm]))
            lhs = gt.psi_small([lab])[0]
            kk = np.arange(m)
            rhs = np.sum(gt.Gq[(-kk) % m] * np.exp(2j * np.pi * kk * mm / m)) / m
            rep.expect(close(rhs, lhs), "psi expansion (F_q)", x=mm)
    return rep


def check_partial_gauss(ctx: FieldCtx, gt: GaussTables | None = None, n: int = 100, seed: int = 0) -> Report:
    """(1/e) sum_j G(chi^-j) chi^j(x) = sum_{a in C} psi(xa), C of index e."""
    gt = gt or GaussTables(ctx)
    rep = Report.for_ctx("oracle.partial_gauss", ctx, n=n, seed=seed)
    rng = np.random.default_rng(seed)
    M, N, q = gt.M, ctx.N, ctx.q
    with timed(rep):
        # index N: subgroup F_q^*, chi_1 = chi^(q-1); index q-1: subgroup C0, chi_2 = chi^N
        for index, step, sub in ((N, q - 1, ctx.fq_star), (q - 1, N, (q - 1) * np.arange(N))):
            j = np.arange(index)
            for x in _sample_logs(ctx, rng, n):
                lhs = np.sum(gt.G[(-j * step) % M] * gt.chi(j * step, x)) / index
                rhs = gt.psi_value(gt.psi_hist((x + sub) % M))
                rep.expect(close(lhs, rhs), "partial Gauss identity", index=index, x=x)
    return rep


def check_singer(lc: LineClassModel, gt: GaussTables | None = None, n_random: int = 3, seed: int = 0) -> Report:
    """chi(S) = G(chi)/q for trace-zero coset representatives S."""
    ctx = lc.ctx
    gt = gt or GaussTables(ctx)
    rep = Report.for_ctx("oracle.singer", ctx, n_random=n_random, seed=seed)
    rng = np.random.default_rng(seed)
    M, N, q = gt.M, ctx.N, ctx.q
    L0 = lc.construction.L0
    with timed(rep):
        ell = np.arange(1, N)
        k = (q - 1) * ell
        target = gt.G[k] / q
        reps = [L0] + [
            (L0 + ctx.fq_star[rng.integers(0, q - 1, size=len(L0))]) % M for _ in range(n_random)
        ]
        for r, S in enumerate(reps):
            vals = gt.char_sum_direct(k, S)
            for i in np.flatnonzero(np.abs(vals - target) > tol(target)):
                rep.fail("chi(S) != G(chi)/q", rep=r, ell=ell[i])
            rep.expect(np.allclose(np.abs(vals), np.sqrt(q), atol=tol(q)), "|chi(S)| != sqrt(q)", rep=r)
        # chi_1^l(E) = (q+1)/(3q) G(chi_1^l)
        E = lc.construction.E
        vals = gt.char_sum_direct(k, E)
        want = (q + 1) / (3 * q) * gt.G[k]
        for i in np.flatnonzero(np.abs(vals - want) > tol(want)):
            rep.fail("chi_1^l(E)", ell=ell[i])
        rep.stats = {"characters": len(ell), "representative_systems": len(reps)}
    return rep


# --- S1, Sigma_1..3 --------------------------------------------------------------------------


class SumOracle:
    """S1, S2 = Sigma_1 + Sigma_2 + Sigma_3 for pairs (a, b) with ab != 0."""

    def __init__(self, lc: LineClassModel, gt: GaussTables | None = None):
        self.lc = lc
        ctx = self.ctx = lc.ctx
        self.gt = gt or GaussTables(ctx)
        cm = lc.construction
        D1, D2 = keyodd_multisets(ctx, cm)
        self.chiE = self.gt.char_sums(cm.E)
        self.chiD1 = self.gt.char_sums(list(D1.elements()))
        self.chiD2 = self.gt.char_sums(list(D2.elements()))
        self.chiT0 = self.gt.char_sums(cm.T0)
        q, N = ctx.q, ctx.N
        self.ell = np.arange(N)
        self.i = np.arange(1, q - 1)

    def S1(self, a: int, b: int) -> complex:
        gt, ctx = self.gt, self.ctx
        M, q = gt.M, ctx.q
        ab = ctx.mul(a, b)
        k = (q - 1) * self.ell
        terms = gt.G[(-k) % M] ** 2 * gt.chi(k, ab) * self.chiE[k]
        return complex(terms.sum() / M)

    def sigmas(self, a: int, b: int) -> tuple[complex, complex, complex]:
        gt, ctx = self.gt, self.ctx
        M, q, N = gt.M, ctx.q, ctx.N
        if len(self.i) == 0:
            return 0j, 0j, 0j
        ab = ctx.mul(a, b)
        ab_inv = ctx.div(a, b)
        I, L = np.meshgrid(self.i, self.ell, indexing="ij")
        kplus = (N * I - (q - 1) * L) % M
        kminus = (-N * I - (q - 1) * L) % M
        ks = (N * I + (q - 1) * L) % M
        w = gt.G[kplus] * gt.G[kminus] * gt.chi((q - 1) * L, ab) * gt.chi(N * I, ab_inv)
        scale = 1.0 / (3 * M)
        s1 = complex((w * self.chiD1[ks]).sum() * scale)
        s2 = complex((w * self.chiD2[ks]).sum() * scale)
        s3 = complex(-(w * self.chiT0[ks]).sum() * scale)
        return s1, s2, s3

    def closed_forms(self, a: int, b: int) -> dict:
        ctx = self.ctx
        q, N = ctx.q, ctx.N
        ab = ctx.mul(a, b)
        _, t0 = ctx.decompose_exponent(ab)
        u0, _ = ctx.decompose_exponent(ctx.div(a, b))
        x0 = ((q - 1) * t0) % ctx.order
        in_T0 = ctx.trace_rel(x0) == ctx.zero
        if in_T0:
            s1 = (q + 1) * (q**3 - q * q + 1) / (3 * (q - 1))
        else:
            s1 = -((q + 1) ** 2) / 3
        z0 = (N * u0 + (q - 1) * t0) % ctx.order
        z1 = (-N * u0 + (q - 1) * t0) % ctx.order
        mu0 = mu_counts(ctx, z0, self.lc.construction.beta)[0]
        mu1 = mu_counts(ctx, z1, self.lc.construction.beta)[1]
        if in_T0:
            base = q**4 / (3 * (q - 1))
            sig = (q**3 / 3 * mu0 - base, q**3 / 3 * mu1 - base, 0.0)
        else:
            sig = (0.0, 0.0, 0.0)
        return {"in_T0": in_T0, "S1": s1, "sigmas": sig, "mu": (mu0, mu1), "z1": z1}


def _pairs(ctx: FieldCtx, sample: int | str, rng) -> tuple[np.ndarray, np.ndarray]:
    M = ctx.order
    if sample == "exhaustive":
        a = np.repeat(np.arange(M), M)
        b = np.tile(np.arange(M), M)
        return a, b
    n = int(sample)
    return rng.integers(0, M, size=n), rng.integers(0, M, size=n)


def check_S_decomposition(
    lc: LineClassModel,
    gt: GaussTables | None = None,
    sample: int | str | None = None,
    seed: int = 0,
    threads: int | None = None,
) -> Report:
    """S1 closed form, Sigma values via mu-counts, and psi_{a,b}(D) = S1 + S2."""
    ctx = lc.ctx
    if sample is None:
        sample = "exhaustive" if ctx.q <= 5 else 500
    so = SumOracle(lc, gt)
    rep = Report.for_ctx("oracle.sums", ctx, sample=sample, seed=seed)
    rng = np.random.default_rng(seed)
    q, x = ctx.q, lc.x_param
    with timed(rep):
        a, b = _pairs(ctx, sample, rng)
        X, Y = build_D(lc)
        hist = trace_histograms(ctx, a, b, X, Y, threads=threads)
        exact = hist[:, 0] - hist[:, 1]
        member = lc.contains(a, b)
        branches = {"T0": 0, "other": 0}
        E = set(lc.construction.E.tolist())
        for idx in range(len(a)):
            ai, bi = int(a[idx]), int(b[idx])
            cf = so.closed_forms(ai, bi)
            branches["T0" if cf["in_T0"] else "other"] += 1
            s1 = so.S1(ai, bi)
            sig = so.sigmas(ai, bi)
            if not close(s1, cf["S1"]):
                rep.fail("S1 closed form", a=ai, b=bi, got=s1.real, expected=cf["S1"])
            for j in range(3):
                if abs(sig[j] - cf["sigmas"][j]) > tol(q**4):
                    rep.fail(f"Sigma_{j + 1}", a=ai, b=bi, got=sig[j].real, expected=cf["sigmas"][j])
            total = s1 + sum(sig)
            if abs(total - exact[idx]) > tol(q**3):
                rep.fail("psi != S1 + S2", a=ai, b=bi, got=total.real, exact=exact[idx])
            if cf["in_T0"]:
                m = sum(cf["mu"])
                rep.expect(m in (1, 4), "mu_z0 + mu'_z1", a=ai, b=bi, got=m)
                rep.expect((m == 4) == (cf["z1"] in E), "mu sum 4 iff z1 in E", a=ai, b=bi)
            want = q**3 - x if member[idx] else -x
            rep.expect(int(exact[idx]) == want, "exact psi value", a=ai, b=bi, got=exact[idx])
        rep.stats = {"pairs": int(len(a)), "branches": branches}
    return rep


# --- sums over D3 ---------------------------------------------------------------------------------


def build_R(ctx: FieldCtx, L0) -> np.ndarray:
    """R = {l + h^(q^2) - h^q : l in F_q, h in L0} as logs."""
    out = []
    for h in np.asarray(L0).tolist():
        d = ctx.sub(ctx.frob(h, 2), ctx.frob(h, 1))
        out.extend(ctx.vadd(ctx.fq_all, d).tolist())
    return np.array(out, dtype=np.int64)


def check_appendix_lemmas(lc: LineClassModel, gt: GaussTables | None = None, sample: int | str | None = None, seed: int = 0) -> Report:
    ctx = lc.ctx
    gt = gt or GaussTables(ctx)
    cm = lc.construction
    M, N, q = gt.M, ctx.N, ctx.q
    if sample is None:
        sample = "exhaustive"
    rep = Report.for_ctx("oracle.appendix", ctx, sample=sample, seed=seed)
    rng = np.random.default_rng(seed)
    with timed(rep):
        _, D2 = keyodd_multisets(ctx, cm)
        D3 = (cm.beta + np.array(list(D2.elements()), dtype=np.int64)) % M
        R = build_R(ctx, cm.L0)
        rep.expect(len(R) == q * (q + 1), "|R|", got=len(R))
        rep.expect(not (R == ctx.zero).any() and not (R % N == 0).any(), "R meets F_q")
        residues = R % N
        rep.expect(len(set(residues.tolist())) == len(R) == N - 1, "R is not a coset system")
        rep_of = {int(r % N): int(r) for r in R}
        C0 = (q - 1) * np.arange(N, dtype=np.int64)
        zs = np.arange(M) if sample == "exhaustive" else _sample_logs(ctx, rng, int(sample))
        fq_hits = 0
        for z in zs.tolist():
            h = gt.psi_hist((z + D3) % M)
            if z % N == 0:
                fq_hits += 1
                target = np.zeros(ctx.p, dtype=np.int64)
                target[0] = q * q + q
            else:
                e = (z - rep_of[z % N]) % M
                target = gt.psi_hist((e + C0) % M)
                target[0] -= 1
            diff = h - target
            if not (diff == diff[0]).all():
                rep.fail("psi(z D3)", z=z)
        # R'_e = -eR
        for e in ctx.fq_star.tolist():
            eR = (e + R) % M
            lhs = set()
            for r in eR.tolist():
                i, l = ctx.decompose_exponent(r)
                lhs.add((N * i - (q - 1) * l) % M)
            rhs = set(((ctx.half + eR) % M).tolist())
            rep.expect(lhs == rhs, "R'_e != -eR", e=e)
        rep.stats = {"z_tested": int(len(zs)), "z_in_Fq": fq_hits, "R": int(len(R))}
    return rep


def run_oracle(
    lc: LineClassModel,
    sample: int | str | None = None,
    seed: int = 0,
    force: bool = False,
    threads: int | None = None,
) -> list[Report]:
    ctx = lc.ctx
    _guard(ctx, force)
    gt = GaussTables(ctx)
    n = 100 if sample in (None, "exhaustive") else max(1, int(sample))
    return [
        check_gauss_properties(ctx, gt),
        check_orthogonality(ctx, gt, n=n, seed=seed),
        check_partial_gauss(ctx, gt, n=n, seed=seed),
        check_singer(lc, gt, seed=seed),
        check_S_decomposition(lc, gt, sample=sample, seed=seed, threads=threads),
        check_appendix_lemmas(lc, gt, sample=None if ctx.q <= 8 else sample, seed=seed),
    ]
