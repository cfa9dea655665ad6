from __future__ import annotations

from collections import Counter

import numpy as np
import pytest

from clforge.construction import (
    all_points,
    beta_gamma,
    build_construction,
    build_D,
    build_orbit,
    c_alpha,
    canonical_points,
    extract_Lx,
    multiset_Wx,
    mu_counts,
    point_keys,
    quadric_points,
    split_keys,
    verify_keyodd_identity,
    x_parameter,
)
from clforge.errors import ConstructionViolation, DomainError

from conftest import ctx_for, lc_for

QS = [2, 5, 8, 11]


@pytest.mark.parametrize("q", QS)
def test_sizes(q):
    lc = lc_for(q)
    cm = lc.construction
    x = x_parameter(q)
    assert len(cm.T0) == q * q - 1
    assert len(cm.L0) == q + 1
    assert all(len(La) == (q + 1) // 3 for La in cm.Lx.values())
    assert len(cm.E) == x
    assert len(lc) == x * (q * q + q + 1)
    X, Y = build_D(lc)
    assert len(X) == (q - 1) * len(lc)


@pytest.mark.parametrize("q", QS)
def test_T0_L0_by_definition(q):
    ctx = ctx_for(q)
    cm = build_construction(ctx)
    T0 = [a for a in range(ctx.order) if ctx.trace_rel(a) == ctx.zero]
    assert cm.T0.tolist() == T0
    L0 = [a for a in T0 if ctx.norm_rel(a) == 0]
    assert sorted(cm.L0.tolist()) == L0
    # L0 is a system of representatives of T0 / F_q^*
    cosets = {tuple(sorted(ctx.mul(a, s) for s in ctx.fq_star.tolist())) for a in cm.L0.tolist()}
    assert len(cosets) == q + 1
    assert set().union(*cosets) == set(T0)
    assert set(cm.E.tolist()) <= set(T0)


def test_beta_gamma():
    for q in QS:
        ctx = ctx_for(q)
        beta, gamma = beta_gamma(ctx)
        assert ctx.mul(beta, ctx.from_int(3)) == ctx.neg(0)
        assert ctx.mul(gamma, ctx.pow(beta, 3)) == 0
        if ctx.p == 2:
            assert beta == gamma == 0


@pytest.mark.parametrize("q", [5, 8, 11, 17])
def test_Wx_multiplicities(q):
    ctx = ctx_for(q)
    cm = build_construction(ctx)
    for x in cm.L0.tolist():
        W = multiset_Wx(ctx, x)
        assert sorted(set(W.values())) == [1, 4]
        assert sum(W.values()) == 2 * q
        assert Counter(W.values())[4] == (q + 1) // 3
        assert all(W[a] == c_alpha(ctx, x, a) for a in W)


def test_Wx_q2_exception():
    ctx = ctx_for(2)
    cm = build_construction(ctx)
    W = multiset_Wx(ctx, int(cm.L0[0]))
    assert dict(W) == {0: 4}
    assert extract_Lx(ctx, W) == (0,)


def test_extract_Lx_rejects_bad_multiset():
    ctx = ctx_for(5)
    with pytest.raises(ConstructionViolation):
        extract_Lx(ctx, Counter({0: 2, 31: 8}))


def test_not_in_L0():
    ctx = ctx_for(5)
    with pytest.raises(DomainError):
        multiset_Wx(ctx, 1)


@pytest.mark.parametrize("q", [2, 5, 8, 11, 17, 23, 29, 32])
def test_keyodd_identity(q):
    assert verify_keyodd_identity(ctx_for(q))


def test_keyodd_identity_detects_tampering():
    ctx = ctx_for(5)
    cm = build_construction(ctx)
    E = cm.E.copy()
    E[0] = next(int(t) for t in cm.T0 if int(t) not in set(E.tolist()))
    bad = type(cm)(cm.ctx, cm.T0, cm.L0, cm.C0, cm.Lx, np.sort(E), cm.beta, cm.gamma, cm.x_param)
    assert not verify_keyodd_identity(ctx, bad)


@pytest.mark.parametrize("q", QS)
def test_canonical_points(q):
    ctx = ctx_for(q)
    rng = np.random.default_rng(q)
    xi = rng.integers(0, ctx.q3, size=400)
    eta = rng.integers(0, ctx.order, size=400)
    cx, ce = canonical_points(ctx, xi, eta)
    for s in ctx.fq_star.tolist():
        sx, se = canonical_points(ctx, ctx.vmul(xi, s), ctx.vmul(eta, s))
        assert (sx == cx).all() and (se == ce).all()
    again = canonical_points(ctx, cx, ce)
    assert (again[0] == cx).all() and (again[1] == ce).all()
    k = point_keys(ctx, cx, ce)
    bx, be = split_keys(ctx, k)
    assert (bx == cx).all() and (be == ce).all()
    with pytest.raises(DomainError):
        canonical_points(ctx, [ctx.zero], [ctx.zero])


@pytest.mark.parametrize("q", [2, 5])
def test_point_enumeration(q):
    ctx = ctx_for(q)
    xi, eta = all_points(ctx)
    assert len(xi) == (q**6 - 1) // (q - 1)
    keys = point_keys(ctx, *canonical_points(ctx, xi, eta))
    assert len(np.unique(keys)) == len(keys)
    qx, qe = quadric_points(ctx)
    assert len(qx) == (q**2 + 1) * (q**3 - 1) // (q - 1)


@pytest.mark.parametrize("q", QS)
def test_M_on_quadric_and_C0_invariant(q):
    ctx = ctx_for(q)
    lc = lc_for(q)
    assert (ctx.trace_zero[ctx.vmul(lc.xi, lc.eta)] == 1).all()
    assert lc.contains(lc.xi, lc.eta).all()
    # (xi, eta) -> (mu xi, mu^-1 eta) for mu in C0
    mu = ctx.q - 1
    assert lc.contains(ctx.vmul(lc.xi, mu), ctx.vmul(lc.eta, -mu % ctx.order)).all()
    # sorted keys, orbits of size N
    assert (np.diff(lc.keys) > 0).all()
    for z in lc.construction.E[:3].tolist():
        assert len(np.unique(build_orbit(ctx, z))) == ctx.N


def test_contains_rejects_non_members():
    ctx = ctx_for(5)
    lc = lc_for(5)
    qx, qe = quadric_points(ctx)
    inside = lc.contains(qx, qe)
    assert inside.sum() == len(lc)


@pytest.mark.parametrize("q", [5, 8, 11])
def test_mu_counts_by_brute_force(q):
    ctx = ctx_for(q)
    beta, _ = beta_gamma(ctx)
    C0 = set(((ctx.q - 1) * np.arange(ctx.N)).tolist())
    rng = np.random.default_rng(0)
    for z in rng.integers(0, ctx.order, size=20).tolist():
        zz = ctx.sub(ctx.frob(z, 1), ctx.frob(z, 2))
        mu = sum(ctx.sub(zz, l) in C0 for l in ctx.fq_all.tolist())
        mu2 = sum(ctx.sub(ctx.mul(beta, zz), l) in C0 for l in ctx.fq_all.tolist())
        assert mu_counts(ctx, z) == (mu, mu2)
