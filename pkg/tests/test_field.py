from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import GF, Poly, symbols
from sympy.polys.galoistools import gf_add, gf_mul, gf_rem

from clforge.errors import BadPolynomial, DivisionByZero, DomainError, TooLarge, UnsupportedParameter
from clforge.field import create_field_ctx, find_primitive_poly, parse_poly

from conftest import ctx_for

QS = [2, 5, 8, 11]


def ref_mul(ctx, a, b):
    """Multiply via sympy polynomial arithmetic, independent of the log tables."""
    dom = GF(ctx.p)
    ca = list(reversed(ctx.coeffs(a)))
    cb = list(reversed(ctx.coeffs(b)))
    mod = list(reversed(ctx.poly))
    prod = gf_rem(gf_mul(ca, cb, ctx.p, dom), mod, ctx.p, dom)
    return ctx.from_coeffs(list(reversed([int(c) for c in prod])))


def ref_add(ctx, a, b):
    dom = GF(ctx.p)
    s = gf_add(list(reversed(ctx.coeffs(a))), list(reversed(ctx.coeffs(b))), ctx.p, dom)
    return ctx.from_coeffs(list(reversed([int(c) for c in s])))


def elems(ctx):
    return st.integers(0, ctx.order)


@pytest.mark.parametrize("q", QS)
def test_poly_is_primitive_irreducible(q):
    ctx = ctx_for(q)
    X = symbols("X")
    assert Poly(list(reversed(ctx.poly)), X, modulus=ctx.p).is_irreducible
    assert len(ctx.poly) == 3 * ctx.n + 1
    assert sorted(ctx.exp[: ctx.order].tolist()) == list(range(1, ctx.q3))


@pytest.mark.parametrize("q", QS)
def test_arithmetic_matches_polynomial_reference(q):
    ctx = ctx_for(q)
    rng = np.random.default_rng(q)
    for a, b in rng.integers(0, ctx.q3, size=(300, 2)):
        a, b = int(a), int(b)
        assert ctx.mul(a, b) == ref_mul(ctx, a, b)
        assert ctx.add(a, b) == ref_add(ctx, a, b)
        assert ctx.sub(ctx.add(a, b), b) == a


@pytest.mark.parametrize("q", QS)
def test_vector_ops_agree_with_scalar(q):
    ctx = ctx_for(q)
    rng = np.random.default_rng(1)
    a = rng.integers(0, ctx.q3, size=500)
    b = rng.integers(0, ctx.q3, size=500)
    assert ctx.vadd(a, b).tolist() == [ctx.add(int(x), int(y)) for x, y in zip(a, b)]
    assert ctx.vmul(a, b).tolist() == [ctx.mul(int(x), int(y)) for x, y in zip(a, b)]
    assert ctx.vneg(a).tolist() == [ctx.neg(int(x)) for x in a]


@pytest.mark.parametrize("q", QS)
def test_trace_and_norm_land_in_subfield(q):
    ctx = ctx_for(q)
    every = np.arange(ctx.q3)
    tr = ctx.vtrace(every)
    nm = ctx.vnorm(every)
    assert all(ctx.in_subfield(int(t)) for t in tr)
    assert all(ctx.in_subfield(int(t)) for t in nm)
    # Tr(a) = a + a^q + a^{q^2} computed directly
    for a in range(0, ctx.q3, max(1, ctx.q3 // 200)):
        direct = ctx.add(ctx.add(a, ctx.frob(a)), ctx.frob(a, 2))
        assert ctx.trace_rel(a) == direct
    # trace is onto F_q with every fibre of size q^2
    counts = np.bincount(ctx.small.vlabel(tr), minlength=q)
    assert (counts == q * q).all()


@pytest.mark.parametrize("q", QS)
def test_abs_trace_is_additive(q):
    ctx = ctx_for(q)
    rng = np.random.default_rng(2)
    for a, b in rng.integers(0, ctx.q3, size=(200, 2)):
        s = ctx.add(int(a), int(b))
        assert ctx.abs_tr(s) == (ctx.abs_tr(int(a)) + ctx.abs_tr(int(b))) % ctx.p


@pytest.mark.parametrize("q", QS)
def test_small_field_tables(q):
    ctx = ctx_for(q)
    fq = ctx.small
    labs = np.arange(q)
    logs = fq.vto_log(labs)
    assert fq.vlabel(logs).tolist() == labs.tolist()
    assert fq.to_log(0) == ctx.zero and fq.to_log(1) == 0
    for i in range(q):
        for j in range(q):
            assert fq.add[i, j] == fq.label(ctx.add(int(logs[i]), int(logs[j])))
            assert fq.mul[i, j] == fq.label(ctx.mul(int(logs[i]), int(logs[j])))
    assert (fq.mul[labs[1:], fq.inv[1:]] == 1).all()
    assert (fq.add[labs, fq.neg] == 0).all()
    assert fq.squares.sum() == (q - 1 if q % 2 == 0 else (q - 1) // 2)


@pytest.mark.parametrize("q", QS)
def test_linear_algebra(q):
    fq = ctx_for(q).small
    rng = np.random.default_rng(3)
    for _ in range(20):
        m = rng.integers(0, q, size=(4, 4))
        if fq.rank(m) < 4:
            continue
        inv = fq.matinv(m)
        for e in range(4):
            unit = np.zeros(4, dtype=np.int64)
            unit[e] = 1
            assert fq.matvec(m, fq.matvec(inv, unit)).tolist() == unit.tolist()
    assert fq.rank(np.zeros((3, 3), dtype=np.int64)) == 0


def test_basis_duality():
    for q in QS:
        ctx = ctx_for(q)
        b, dual = ctx.basis
        for i in range(3):
            for j in range(3):
                t = ctx.trace_rel(ctx.mul(b[i], dual[j]))
                assert t == (0 if i == j else ctx.zero)
        rng = np.random.default_rng(4)
        a = rng.integers(0, ctx.q3, size=50)
        c = ctx.coords(a)
        # rebuild a from its coordinates
        for k, av in enumerate(a.tolist()):
            acc = ctx.zero
            for i in range(3):
                acc = ctx.add(acc, ctx.mul(ctx.small.to_log(int(c[k, i])), b[i]))
            assert acc == av


def test_decompose_exponent():
    ctx = ctx_for(11)
    for a in range(0, ctx.order, 97):
        i, l = ctx.decompose_exponent(a)
        assert (ctx.N * i + (ctx.q - 1) * l) % ctx.order == a
        assert 0 <= i < ctx.q - 1 and 0 <= l < ctx.N


def test_cube_root():
    for q in (5, 8, 11):
        ctx = ctx_for(q)
        for a in ctx.fq_star.tolist():
            assert ctx.pow(ctx.cube_root(a), 3) == a
    ctx = ctx_for(5)
    with pytest.raises(DomainError):
        ctx.cube_root(ctx.zero)
    assert ctx.cube_root(ctx.zero, allow_zero=True) == ctx.zero
    with pytest.raises(DomainError):
        ctx.cube_root(1)


def test_element_wrapper():
    ctx = ctx_for(5)
    a, b = ctx.element(7), ctx.element(30)
    assert (a * b).log == ctx.mul(7, 30)
    assert (a + b - b) == a
    assert (a / b * b) == a
    assert (a**3).log == ctx.pow(7, 3)
    with pytest.raises(DivisionByZero):
        ctx.element(ctx.zero).inverse()
    with pytest.raises(DivisionByZero):
        ctx.inv(ctx.zero)


@pytest.mark.parametrize("p,n", [(3, 1), (7, 1), (2, 2), (13, 1)])
def test_rejects_q_not_2_mod_3(p, n):
    with pytest.raises(UnsupportedParameter, match=r"q ≡ 2 \(mod 3\) required, got q = "):
        create_field_ctx(p, n)


def test_rejects_bad_inputs():
    with pytest.raises(UnsupportedParameter):
        create_field_ctx(4, 1)
    with pytest.raises(UnsupportedParameter):
        create_field_ctx(2, 0)
    with pytest.raises(TooLarge):
        create_field_ctx(53, 1, max_size=10**5)
    with pytest.raises(BadPolynomial):
        create_field_ctx(2, 1, poly=[1, 0, 0, 1])  # X^3 + 1 is reducible
    with pytest.raises(BadPolynomial):
        create_field_ctx(5, 1, poly=[1, 1])


def test_user_polynomials():
    ctx = create_field_ctx(2, 1, poly="1,0,1,1")
    assert ctx.poly == [1, 0, 1, 1]
    ctx8 = create_field_ctx(2, 3, base_poly=[1, 0, 1, 1])
    assert ctx8.base_poly == [1, 0, 1, 1]
    assert parse_poly("1, 1,0 ,1") == [1, 1, 0, 1]
    assert len(find_primitive_poly(5, 3)) == 4


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_field_axioms_property(data):
    ctx = ctx_for(8)
    a, b, c = (data.draw(elems(ctx)) for _ in range(3))
    assert ctx.mul(a, ctx.add(b, c)) == ctx.add(ctx.mul(a, b), ctx.mul(a, c))
    assert ctx.add(a, ctx.add(b, c)) == ctx.add(ctx.add(a, b), c)
    assert ctx.frob(ctx.add(a, b)) == ctx.add(ctx.frob(a), ctx.frob(b))
    assert ctx.frob(a, 3) == a
