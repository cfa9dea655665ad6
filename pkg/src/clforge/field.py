"""Exact arithmetic in the tower F_p < F_q < F_{q^3}.

Every element of F_{q^3} is identified by its discrete logarithm with respect
to a fixed primitive element ``w``; zero gets the sentinel index
``ctx.zero == q^3 - 1``.  Multiplication is addition of indices, addition
goes through a Zech logarithm table.  F_q is handled as the subfield
``{0} u {w^(N*m)}`` with ``N = q^2 + q + 1``.

Small F_q computations (Pluecker coordinates, projectivities, cubic root
counts) use :class:`SmallField`, whose elements are *labels* in ``[0, q)``:
the base-p integer built from the coefficients over F_p in the power basis
of a root of the F_q defining polynomial.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np
from sympy import factorint, isprime
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_irreducible_p

from clforge.errors import (
    BadPolynomial,
    DivisionByZero,
    DomainError,
    TooLarge,
    UnsupportedParameter,
)

DEFAULT_MAX_SIZE = 2**24
_CHUNK = 1 << 20


# --- polynomial helpers over F_p (little-endian digit lists) -------------


def _polymulmod(a: Sequence[int], b: Sequence[int], poly: Sequence[int], p: int) -> list[int]:
    d = len(poly) - 1
    prod = [0] * (2 * d - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    prod[i + j] = (prod[i + j] + ai * bj) % p
    for k in range(2 * d - 2, d - 1, -1):
        c = prod[k]
        if c:
            for j in range(d + 1):
                prod[k - d + j] = (prod[k - d + j] - c * poly[j]) % p
    return prod[:d]


def _polypow(a: Sequence[int], e: int, poly: Sequence[int], p: int) -> list[int]:
    d = len(poly) - 1
    result = [1] + [0] * (d - 1)
    base = list(a)
    while e:
        if e & 1:
            result = _polymulmod(result, base, poly, p)
        base = _polymulmod(base, base, poly, p)
        e >>= 1
    return result


def _digits(enc: int, p: int, d: int) -> list[int]:
    out = []
    for _ in range(d):
        enc, r = divmod(enc, p)
        out.append(r)
    return out


def _is_irreducible(poly: Sequence[int], p: int) -> bool:
    return bool(gf_irreducible_p([int(c) for c in reversed(poly)], p, ZZ))


def _has_order(elem: Sequence[int], poly: Sequence[int], p: int, order: int) -> bool:
    d = len(poly) - 1
    one = [1] + [0] * (d - 1)
    if _polypow(elem, order, poly, p) != one:
        return False
    return all(_polypow(elem, order // r, poly, p) != one for r in factorint(order))


def find_primitive_poly(p: int, d: int) -> list[int]:
    """Smallest monic primitive polynomial of degree ``d`` over F_p.

    Candidates are ordered by the base-p integer of their lower coefficients
    (little-endian), so the result is deterministic.
    """
    order = p**d - 1
    t = [0, 1] + [0] * (d - 2) if d > 1 else None
    for enc in range(1, p**d):
        poly = _digits(enc, p, d) + [1]
        if poly[0] == 0 or not _is_irreducible(poly, p):
            continue
        gen = t if t is not None else [(-poly[0]) % p]
        if _has_order(gen, poly, p, order):
            return poly
    raise BadPolynomial(f"no primitive polynomial of degree {d} over F_{p}")  # pragma: no cover


def parse_poly(text: str) -> list[int]:
    """Parse the little-endian override format, e.g. ``"1,1,0,1"`` for t^3+t+1."""
    try:
        return [int(c) for c in text.replace(" ", "").split(",") if c != ""]
    except ValueError as exc:
        raise BadPolynomial(f"cannot parse polynomial {text!r}") from exc


def _normalize_poly(poly: Sequence[int], p: int, degree: int, what: str) -> list[int]:
    coeffs = [int(c) % p for c in poly]
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if len(coeffs) - 1 != degree:
        raise BadPolynomial(f"{what} polynomial must have degree {degree}, got {len(coeffs) - 1}")
    lead_inv = pow(coeffs[-1], -1, p)
    coeffs = [(c * lead_inv) % p for c in coeffs]
    if not _is_irreducible(coeffs, p):
        raise BadPolynomial(f"{what} polynomial {coeffs} is reducible over F_{p}")
    return coeffs


# --- vectorised helpers on base-p encodings -------------------------------


def _enc_add(a: np.ndarray, b: np.ndarray, p: int, d: int) -> np.ndarray:
    if p == 2:
        return np.bitwise_xor(a, b)
    a = np.array(a, dtype=np.int64)
    b = np.array(b, dtype=np.int64)
    out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
    place = 1
    for _ in range(d):
        out += ((a % p + b % p) % p) * place
        a //= p
        b //= p
        place *= p
    return out


def _power_table(w: Sequence[int], poly: Sequence[int], p: int, order: int) -> np.ndarray:
    """Encodings of w^0 .. w^(order-1), filled by repeated doubling."""
    d = len(poly) - 1
    weights = p ** np.arange(d, dtype=np.int64)
    table = np.zeros(order, dtype=np.int64)
    table[0] = 1
    filled = 1
    wpow = list(w)
    units = [[int(i == j) for i in range(d)] for j in range(d)]
    while filled < order:
        # column j of the matrix: w^filled * t^j
        mat = np.array([_polymulmod(wpow, u, poly, p) for u in units], dtype=np.int64)
        take = min(filled, order - filled)
        for start in range(0, take, _CHUNK):
            stop = min(start + _CHUNK, take)
            enc = table[start:stop]
            digs = (enc[:, None] // weights) % p
            table[filled + start : filled + stop] = ((digs @ mat) % p) @ weights
        wpow = _polymulmod(wpow, wpow, poly, p)
        filled += take
    return table


# --- the context -----------------------------------------------------------


class FieldCtx:
    """Immutable tables for F_p < F_q < F_{q^3} with q = p^n = 2 (mod 3)."""

    def __init__(
        self,
        p: int,
        n: int,
        poly: list[int],
        base_poly: list[int],
        w: list[int],
        beta_log: int,
        exp: np.ndarray,
    ):
        self.p = p
        self.n = n
        self.q = p**n
        self.q3 = self.q**3
        self.order = self.q3 - 1
        self.zero = self.order
        self.N = self.q * self.q + self.q + 1
        self.degree = 3 * n
        self.poly = poly
        self.base_poly = base_poly
        self.w = w
        self.half = self.order // 2 if p != 2 else 0  # log of -1
        order = self.order
        d = self.degree

        exp_full = np.empty(self.q3, dtype=np.int64)
        exp_full[:order] = exp
        exp_full[order] = 0
        log = np.full(self.q3, -1, dtype=np.int64)
        log[exp] = np.arange(order, dtype=np.int64)
        log[0] = order
        if (log < 0).any():
            raise BadPolynomial("chosen generator is not primitive")  # pragma: no cover
        self.exp = exp_full.astype(np.int32)
        self.log = log.astype(np.int32)

        zech = np.empty(self.q3, dtype=np.int64)
        zech[:order] = log[_enc_add(exp, np.int64(1), p, d)]
        zech[order] = 0
        self.zech = zech.astype(np.int32)

        k = np.arange(order, dtype=np.int64)
        s = _enc_add(exp, exp[(k * self.q) % order], p, d)
        s = _enc_add(s, exp[(k * self.q * self.q) % order], p, d)
        tr = np.empty(self.q3, dtype=np.int64)
        tr[:order] = log[s]
        tr[order] = order
        bad = (tr != order) & (tr % self.N != 0)
        if bad.any():
            raise BadPolynomial("relative trace left F_q; tables are inconsistent")  # pragma: no cover
        self.trace_table = tr.astype(np.int32)
        self.trace_zero = (tr == order).astype(np.uint8)

        acc = exp.copy()
        for i in range(1, d):
            acc = _enc_add(acc, exp[(k * p**i) % order], p, d)
        if (acc >= p).any():
            raise BadPolynomial("absolute trace left F_p")  # pragma: no cover
        abs_tr = np.zeros(self.q3, dtype=np.int64)
        abs_tr[:order] = acc
        self.abs_trace = abs_tr.astype(np.int32)

        self.cube_exp = pow(3, -1, self.q - 1) if self.q > 2 else 1
        self.beta_log = beta_log  # root of the F_q defining polynomial
        for arr in (self.exp, self.log, self.zech, self.trace_table, self.trace_zero, self.abs_trace):
            arr.setflags(write=False)

    def __repr__(self) -> str:
        return f"FieldCtx(p={self.p}, n={self.n}, q={self.q})"

    # --- scalar arithmetic on logs --------------------------------------

    def mul(self, a: int, b: int) -> int:
        if a == self.zero or b == self.zero:
            return self.zero
        return (a + b) % self.order

    def add(self, a: int, b: int) -> int:
        if a == self.zero:
            return b
        if b == self.zero:
            return a
        z = int(self.zech[(b - a) % self.order])
        if z == self.zero:
            return self.zero
        return (a + z) % self.order

    def neg(self, a: int) -> int:
        if a == self.zero:
            return a
        return (a + self.half) % self.order

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def inv(self, a: int) -> int:
        if a == self.zero:
            raise DivisionByZero("inverse of zero")
        return (-a) % self.order

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if a == self.zero:
            if e < 0:
                raise DivisionByZero("negative power of zero")
            return self.zero if e else 0
        return (a * e) % self.order

    def frob(self, a: int, k: int = 1) -> int:
        """a -> a^(q^k)."""
        if a == self.zero:
            return a
        return (a * pow(self.q, k, self.order)) % self.order

    def trace_rel(self, a: int) -> int:
        return int(self.trace_table[a])

    def norm_rel(self, a: int) -> int:
        if a == self.zero:
            return a
        return (a * self.N) % self.order

    def abs_tr(self, a: int) -> int:
        return int(self.abs_trace[a])

    def in_subfield(self, a: int) -> bool:
        return a == self.zero or a % self.N == 0

    def cube_root(self, y: int, allow_zero: bool = False) -> int:
        if y == self.zero:
            if allow_zero:
                return y
            raise DomainError("cube_root(0) requested without allow_zero")
        if not self.in_subfield(y):
            raise DomainError("cube_root is defined on F_q only")
        return (y * self.cube_exp) % self.order

    def decompose_exponent(self, a: int) -> tuple[int, int]:
        """Return (i, l) with a = w^(N*i + (q-1)*l), 0 <= i < q-1, 0 <= l < N."""
        if a == self.zero:
            raise DomainError("decompose_exponent(0)")
        q1 = self.q - 1
        i = (a * pow(self.N, -1, q1)) % q1 if q1 > 1 else 0
        l = (a * pow(q1, -1, self.N)) % self.N
        return i, l

    def from_int(self, c: int) -> int:
        """Log of the prime-field element c."""
        return int(self.log[c % self.p])

    def element(self, log: int, subfield: bool | None = None) -> "FieldElem":
        if subfield is None:
            subfield = self.in_subfield(log)
        return FieldElem(self, int(log), bool(subfield))

    def from_coeffs(self, coeffs: Sequence[int]) -> int:
        """Log of the element with the given little-endian F_p coefficients."""
        enc = 0
        for c in reversed(list(coeffs)):
            enc = enc * self.p + (int(c) % self.p)
        if enc >= self.q3:
            raise DomainError("too many coefficients")
        return int(self.log[enc])

    def coeffs(self, a: int) -> list[int]:
        return _digits(int(self.exp[a]), self.p, self.degree)

    # --- vectorised arithmetic ------------------------------------------

    def vmul(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        out = (a + b) % self.order
        return np.where((a == self.zero) | (b == self.zero), self.zero, out)

    def vadd(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        a, b = np.broadcast_arrays(a, b)
        z = self.zech[(b - a) % self.order].astype(np.int64)
        out = np.where(z == self.zero, self.zero, (a + z) % self.order)
        out = np.where(a == self.zero, b, out)
        return np.where(b == self.zero, a, out)

    def vneg(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        return np.where(a == self.zero, a, (a + self.half) % self.order)

    def vfrob(self, a, k: int = 1) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        return np.where(a == self.zero, a, (a * pow(self.q, k, self.order)) % self.order)

    def vtrace(self, a) -> np.ndarray:
        return self.trace_table[np.asarray(a, dtype=np.int64)].astype(np.int64)

    def vnorm(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        return np.where(a == self.zero, a, (a * self.N) % self.order)

    # --- subfield views ---------------------------------------------------

    @cached_property
    def fq_star(self) -> np.ndarray:
        """Logs of F_q^*, in the order w^(N*m), m = 0..q-2."""
        return self.N * np.arange(self.q - 1, dtype=np.int64)

    @cached_property
    def fq_all(self) -> np.ndarray:
        return np.concatenate([[self.zero], self.fq_star]).astype(np.int64)

    @cached_property
    def small(self) -> "SmallField":
        return SmallField(self)

    @cached_property
    def basis(self) -> tuple[list[int], list[int]]:
        """F_q-basis (1, w, w^2) of F_{q^3} and its trace-dual basis, as logs."""
        sf = self.small
        b = [0, 1 % self.order, 2 % self.order]
        gram = np.array(
            [[sf.label(self.trace_rel(self.mul(x, y))) for y in b] for x in b], dtype=np.int64
        )
        ginv = sf.matinv(gram)
        dual = []
        for j in range(3):
            acc = self.zero
            for k in range(3):
                acc = self.add(acc, self.mul(sf.to_log(int(ginv[j, k])), b[k]))
            dual.append(acc)
        return b, dual

    def coords(self, a) -> np.ndarray:
        """F_q coordinates (labels) of F_{q^3} elements in the basis (1, w, w^2)."""
        a = np.asarray(a, dtype=np.int64)
        _, dual = self.basis
        cols = [self.small.vlabel(self.vtrace(self.vmul(a, d))) for d in dual]
        return np.stack(cols, axis=-1)

    def dual_coords(self, a) -> np.ndarray:
        """F_q coordinates (labels) in the trace-dual basis."""
        a = np.asarray(a, dtype=np.int64)
        b, _ = self.basis
        cols = [self.small.vlabel(self.vtrace(self.vmul(a, x))) for x in b]
        return np.stack(cols, axis=-1)

    def describe(self) -> dict:
        return {
            "p": self.p,
            "n": self.n,
            "q": self.q,
            "poly": self.poly,
            "base_poly": self.base_poly,
            "w": self.w,
            "base_root_log": self.beta_log,
        }


@dataclass(frozen=True)
class FieldElem:
    """Convenience wrapper around a log index; bulk code works on raw logs."""

    ctx: FieldCtx
    log: int
    subfield: bool = False

    def _wrap(self, other: "FieldElem", log: int) -> "FieldElem":
        return FieldElem(self.ctx, log, self.subfield and other.subfield)

    def __add__(self, other: "FieldElem") -> "FieldElem":
        return self._wrap(other, self.ctx.add(self.log, other.log))

    def __sub__(self, other: "FieldElem") -> "FieldElem":
        return self._wrap(other, self.ctx.sub(self.log, other.log))

    def __mul__(self, other: "FieldElem") -> "FieldElem":
        return self._wrap(other, self.ctx.mul(self.log, other.log))

    def __truediv__(self, other: "FieldElem") -> "FieldElem":
        return self._wrap(other, self.ctx.div(self.log, other.log))

    def __neg__(self) -> "FieldElem":
        return FieldElem(self.ctx, self.ctx.neg(self.log), self.subfield)

    def __pow__(self, e: int) -> "FieldElem":
        return FieldElem(self.ctx, self.ctx.pow(self.log, e), self.subfield)

    def inverse(self) -> "FieldElem":
        return FieldElem(self.ctx, self.ctx.inv(self.log), self.subfield)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FieldElem) and other.ctx is self.ctx and other.log == self.log

    def __hash__(self) -> int:
        return hash(self.log)

    @property
    def is_zero(self) -> bool:
        return self.log == self.ctx.zero

    def coeffs(self) -> list[int]:
        return self.ctx.coeffs(self.log)

    def __repr__(self) -> str:
        if self.is_zero:
            return "0"
        return f"w^{self.log}"


class SmallField:
    """Dense operation tables for F_q on labels 0..q-1 (label 0 is zero, 1 is one)."""

    def __init__(self, ctx: FieldCtx):
        self.ctx = ctx
        q, p, n = ctx.q, ctx.p, ctx.n
        self.q, self.p = q, p
        to_log = np.empty(q, dtype=np.int64)
        for lab in range(q):
            acc = ctx.zero
            for i, c in enumerate(_digits(lab, p, n)):
                if c:
                    acc = ctx.add(acc, ctx.mul(ctx.from_int(c), ctx.pow(ctx.beta_log, i)))
            to_log[lab] = acc
        if not all(ctx.in_subfield(int(a)) for a in to_log):
            raise BadPolynomial("base field embedding left F_q")  # pragma: no cover
        by_m = np.full(q - 1, -1, dtype=np.int64)
        for lab in range(1, q):
            by_m[to_log[lab] // ctx.N] = lab
        self._to_log = to_log
        self._by_m = by_m
        logs = to_log
        self.add = self._table(ctx.vadd(logs[:, None], logs[None, :]))
        self.mul = self._table(ctx.vmul(logs[:, None], logs[None, :]))
        self.neg = self.vlabel(ctx.vneg(logs))
        inv = np.zeros(q, dtype=np.int64)
        inv[1:] = self.vlabel((-logs[1:]) % ctx.order)
        self.inv = inv
        self.sub = self.add[np.arange(q)[:, None], self.neg[None, :]]
        self.abs_trace = self._subfield_abs_trace()
        self.squares = np.zeros(q, dtype=bool)
        self.squares[self.mul[np.arange(1, q), np.arange(1, q)]] = True

    def _table(self, logs: np.ndarray) -> np.ndarray:
        return self.vlabel(logs)

    def _subfield_abs_trace(self) -> np.ndarray:
        ctx = self.ctx
        out = np.zeros(self.q, dtype=np.int64)
        for lab in range(1, self.q):
            a = int(self._to_log[lab])
            acc = ctx.zero
            for i in range(ctx.n):
                acc = ctx.add(acc, ctx.pow(a, ctx.p**i))
            out[lab] = int(ctx.exp[acc])
        return out

    def label(self, log: int) -> int:
        ctx = self.ctx
        if log == ctx.zero:
            return 0
        if log % ctx.N:
            raise DomainError("element is not in F_q")
        return int(self._by_m[log // ctx.N])

    def vlabel(self, logs) -> np.ndarray:
        logs = np.asarray(logs, dtype=np.int64)
        out = np.zeros(logs.shape, dtype=np.int64)
        nz = logs != self.ctx.zero
        if (logs[nz] % self.ctx.N).any():
            raise DomainError("element is not in F_q")
        out[nz] = self._by_m[logs[nz] // self.ctx.N]
        return out

    def to_log(self, lab: int) -> int:
        return int(self._to_log[lab])

    def vto_log(self, labs) -> np.ndarray:
        return self._to_log[np.asarray(labs, dtype=np.int64)]

    def from_int(self, c: int) -> int:
        """Label of the prime-field element c."""
        return c % self.p

    # --- small linear algebra over F_q ----------------------------------

    def dot(self, u, v) -> int:
        acc = 0
        for a, b in zip(u, v):
            acc = self.add[acc, self.mul[int(a), int(b)]]
        return int(acc)

    def matvec(self, mat, vec) -> np.ndarray:
        mat = np.asarray(mat, dtype=np.int64)
        return np.array([self.dot(row, vec) for row in mat], dtype=np.int64)

    def vmatvec(self, mat, vecs) -> np.ndarray:
        """Apply ``mat`` to each row of ``vecs``."""
        mat = np.asarray(mat, dtype=np.int64)
        vecs = np.asarray(vecs, dtype=np.int64)
        out = np.zeros((vecs.shape[0], mat.shape[0]), dtype=np.int64)
        for i in range(mat.shape[0]):
            acc = np.zeros(vecs.shape[0], dtype=np.int64)
            for j in range(mat.shape[1]):
                acc = self.add[acc, self.mul[mat[i, j], vecs[:, j]]]
            out[:, i] = acc
        return out

    def row_reduce(self, mat) -> tuple[np.ndarray, list[int]]:
        m = np.array(mat, dtype=np.int64)
        rows, cols = m.shape
        pivots: list[int] = []
        r = 0
        for c in range(cols):
            piv = next((i for i in range(r, rows) if m[i, c]), None)
            if piv is None:
                continue
            m[[r, piv]] = m[[piv, r]]
            m[r] = self.mul[self.inv[m[r, c]], m[r]]
            for i in range(rows):
                if i != r and m[i, c]:
                    m[i] = self.sub[m[i], self.mul[m[i, c], m[r]]]
            pivots.append(c)
            r += 1
            if r == rows:
                break
        return m, pivots

    def rank(self, mat) -> int:
        return len(self.row_reduce(mat)[1])

    def matinv(self, mat) -> np.ndarray:
        mat = np.asarray(mat, dtype=np.int64)
        k = mat.shape[0]
        aug = np.concatenate([mat, np.eye(k, dtype=np.int64)], axis=1)
        red, piv = self.row_reduce(aug)
        if piv[:k] != list(range(k)):
            raise DivisionByZero("singular matrix")
        return red[:, k:]

    def normalize(self, vec) -> tuple[int, ...]:
        """Projective canonical form: first nonzero coordinate scaled to 1."""
        vec = np.asarray(vec, dtype=np.int64)
        nz = np.flatnonzero(vec)
        if nz.size == 0:
            raise DomainError("zero vector has no projective point")
        return tuple(int(c) for c in self.mul[self.inv[vec[nz[0]]], vec])

    def vnormalize(self, vecs) -> np.ndarray:
        vecs = np.asarray(vecs, dtype=np.int64)
        first = np.argmax(vecs != 0, axis=1)
        lead = vecs[np.arange(vecs.shape[0]), first]
        if (lead == 0).any():
            raise DomainError("zero vector has no projective point")
        return self.mul[self.inv[lead][:, None], vecs]


def create_field_ctx(
    p: int,
    n: int = 1,
    poly: Sequence[int] | str | None = None,
    base_poly: Sequence[int] | str | None = None,
    max_size: int = DEFAULT_MAX_SIZE,
) -> FieldCtx:
    """Build the tables for F_p < F_q < F_{q^3}, q = p^n.

    ``poly`` overrides the degree-3n polynomial defining F_{q^3} over F_p;
    ``base_poly`` the degree-n polynomial defining F_q.  Both use the
    little-endian coefficient convention.
    """
    if not isprime(p):
        raise UnsupportedParameter(f"p={p} is not prime")
    if n < 1:
        raise UnsupportedParameter("n must be positive")
    q = p**n
    if q % 3 != 2:
        raise UnsupportedParameter(f"q ≡ 2 (mod 3) required, got q = {q}")
    if q**3 > max_size:
        raise TooLarge(f"q^3 = {q**3} exceeds the table cap {max_size}")
    d = 3 * n
    order = q**3 - 1
    if isinstance(poly, str):
        poly = parse_poly(poly)
    if isinstance(base_poly, str):
        base_poly = parse_poly(base_poly)

    if poly is None:
        big = find_primitive_poly(p, d)
        w = _digits(p, p, d) if d > 1 else [(-big[0]) % p]
    else:
        big = _normalize_poly(poly, p, d, "extension")
        w = None
        for enc in range(1, p**d):
            cand = _digits(enc, p, d)
            if _has_order(cand, big, p, order):
                w = cand
                break
        if w is None:  # pragma: no cover
            raise BadPolynomial("no primitive element found")
    exp = _power_table(w, big, p, order)

    # provisional context without the subfield root, used to derive it
    ctx = FieldCtx(p, n, big, [], w, 0, exp)
    N = ctx.N
    if base_poly is None:
        beta = N % order
        coeffs = [0]  # product of (X - beta^(p^i)), logs, highest first
        for i in range(n):
            root = ctx.neg(ctx.pow(beta, p**i))
            new = [ctx.zero] * (len(coeffs) + 1)
            for j, c in enumerate(coeffs):
                new[j] = ctx.add(new[j], c)
                new[j + 1] = ctx.add(new[j + 1], ctx.mul(c, root))
            coeffs = new
        small_poly = [int(ctx.exp[c]) for c in reversed(coeffs)]
        if any(c >= p for c in small_poly):  # pragma: no cover
            raise BadPolynomial("minimal polynomial left F_p")
    else:
        small_poly = _normalize_poly(base_poly, p, n, "base")
        beta = None
        for m in range(q - 1):
            cand = (N * m) % order
            acc = ctx.zero
            for i, c in enumerate(small_poly):
                if c:
                    acc = ctx.add(acc, ctx.mul(ctx.from_int(c), ctx.pow(cand, i)))
            if acc == ctx.zero:
                beta = cand
                break
        if beta is None:  # pragma: no cover
            raise BadPolynomial("base polynomial has no root in the subfield")
    ctx.base_poly = small_poly
    ctx.beta_log = beta
    return ctx
