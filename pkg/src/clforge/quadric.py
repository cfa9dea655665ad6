"""The quadric (V, Q), Q((x, y)) = Tr(xy), and its transport to lines of PG(3, q).

The isometry to the Pluecker quadric is fixed by the basis (1, w, w^2) of
F_{q^3} over F_q and its trace-dual basis: writing x in the basis and y in
the dual basis gives six F_q coordinates whose split form is exactly
p01 p23 + p02 p31 + p03 p12.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from clforge.construction import (
    LineClassModel,
    all_points,
    canonical_points,
    point_keys,
    quadric_points,
)
from clforge.errors import DomainError, NondegeneracyViolation, NotALine, TooLarge
from clforge.field import FieldCtx, SmallField
from clforge.kernels import perp_counts

PLUCKER_NAMES = ("p01", "p02", "p03", "p23", "p31", "p12")
# index pairs of the hyperbolic pairs in the Pluecker ordering
_PAIRS = ((0, 3), (1, 4), (2, 5))


def eval_Q(ctx: FieldCtx, v: tuple[int, int]) -> int:
    """Q((x, y)) = Tr(xy), as a log in F_q."""
    x, y = v
    return ctx.trace_rel(ctx.mul(x, y))


def eval_f(ctx: FieldCtx, u: tuple[int, int], v: tuple[int, int]) -> int:
    """Polar form f((x, y), (a, b)) = Tr(bx + ay)."""
    (x, y), (a, b) = u, v
    return ctx.trace_rel(ctx.add(ctx.mul(b, x), ctx.mul(a, y)))


def enumerate_quadric_points(ctx: FieldCtx) -> tuple[np.ndarray, np.ndarray]:
    return quadric_points(ctx)


def perp_count(ctx: FieldCtx, P: tuple[int, int], xi, eta) -> int:
    """|P^perp cap S| for a single point P and point set S = (xi, eta)."""
    return int(perp_counts(ctx, [P[0]], [P[1]], xi, eta)[0])


# --- Pluecker coordinates ----------------------------------------------------


def to_plucker(ctx: FieldCtx, xi, eta) -> np.ndarray:
    """Pluecker coordinates (labels, unnormalised) of points (xi, eta) of V."""
    return np.concatenate([ctx.coords(xi), ctx.dual_coords(eta)], axis=-1)


def plucker_Q(fq: SmallField, v) -> np.ndarray:
    v = np.asarray(v, dtype=np.int64)
    acc = np.zeros(v.shape[:-1], dtype=np.int64)
    for i, j in _PAIRS:
        acc = fq.add[acc, fq.mul[v[..., i], v[..., j]]]
    return acc


def plucker_pairing(fq: SmallField, u, v) -> np.ndarray:
    u = np.asarray(u, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64)
    acc = np.zeros(np.broadcast_shapes(u.shape[:-1], v.shape[:-1]), dtype=np.int64)
    for i, j in _PAIRS:
        acc = fq.add[acc, fq.mul[u[..., i], v[..., j]]]
        acc = fq.add[acc, fq.mul[u[..., j], v[..., i]]]
    return acc


def plucker_of_points(fq: SmallField, x, y) -> np.ndarray:
    """Pluecker coordinates of the lines through x and y (rows of 4 labels)."""
    x = np.asarray(x, dtype=np.int64)
    y = np.asarray(y, dtype=np.int64)

    def p(i, j):
        return fq.sub[fq.mul[x[..., i], y[..., j]], fq.mul[x[..., j], y[..., i]]]

    return np.stack([p(0, 1), p(0, 2), p(0, 3), p(2, 3), p(3, 1), p(1, 2)], axis=-1)


def plucker_keys(fq: SmallField, pl) -> np.ndarray:
    """Integer key of the normalised coordinate vector (first nonzero = 1)."""
    norm = fq.vnormalize(np.atleast_2d(pl))
    weights = fq.q ** np.arange(6, dtype=np.int64)
    return norm @ weights


def plucker_matrix(fq: SmallField, pl) -> np.ndarray:
    p01, p02, p03, p23, p31, p12 = (int(c) for c in pl)
    neg = fq.neg
    return np.array(
        [
            [0, p01, p02, p03],
            [neg[p01], 0, p12, neg[p31]],
            [neg[p02], neg[p12], 0, p23],
            [neg[p03], p31, neg[p23], 0],
        ],
        dtype=np.int64,
    )


def plucker_to_line(fq: SmallField, pl) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Two spanning points of the line with Pluecker coordinates ``pl``.

    Rows of the antisymmetric Pluecker matrix lie in the line; the first
    nonzero row and the first row independent of it are returned.
    """
    pl = np.asarray(pl, dtype=np.int64)
    if pl.shape != (6,) or not pl.any():
        raise NotALine("need six coordinates, not all zero")
    if int(plucker_Q(fq, pl)) != 0:
        raise NotALine(f"{pl.tolist()} is off the Klein quadric")
    mat = plucker_matrix(fq, pl)
    rows = [i for i in range(4) if mat[i].any()]
    first = mat[rows[0]]
    for i in rows[1:]:
        if fq.rank(np.stack([first, mat[i]])) == 2:
            return fq.normalize(first), fq.normalize(mat[i])
    raise NotALine("Pluecker matrix has rank < 2")  # pragma: no cover


def lines_meet(fq: SmallField, l1, l2) -> bool:
    return fq.rank(np.array([l1[0], l1[1], l2[0], l2[1]], dtype=np.int64)) < 4


def points_of_line(fq: SmallField, x, y) -> np.ndarray:
    """All q+1 normalised points on the line spanned by x and y."""
    x = np.asarray(x, dtype=np.int64)
    y = np.asarray(y, dtype=np.int64)
    lam = np.arange(fq.q, dtype=np.int64)
    pts = fq.add[x[None, :], fq.mul[lam[:, None], y[None, :]]]
    return fq.vnormalize(np.vstack([pts, y[None, :]]))


# --- Witt decomposition ---------------------------------------------------------


def hyperbolic_basis(fq: SmallField, Q, dim: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """Hyperbolic pairs (e_i, f_i) for a quadratic form on F_q^dim.

    ``Q`` maps a label vector to a label.  Raises NondegeneracyViolation if
    the form has a radical or an anisotropic part.
    """

    def f(u, v):
        return int(fq.sub[fq.sub[Q(fq.add[u, v]), Q(u)], Q(v)])

    def scale(c, v):
        return fq.mul[c, v]

    space = [np.eye(dim, dtype=np.int64)[i] for i in range(dim)]
    pairs = []
    while space:
        k = len(space)
        basis = np.array(space)
        e = None
        for coeffs in itertools.product(range(fq.q), repeat=k):
            if not any(coeffs):
                continue
            v = np.zeros(dim, dtype=np.int64)
            for c, b in zip(coeffs, basis):
                v = fq.add[v, scale(c, b)]
            if Q(v) == 0:
                e = v
                break
        if e is None:
            raise NondegeneracyViolation("form restricted to a complement is anisotropic")
        partner = next((b for b in basis if f(e, b) != 0), None)
        if partner is None:
            raise NondegeneracyViolation(f"radical vector {e.tolist()}")
        v = scale(int(fq.inv[f(e, partner)]), partner)
        fv = fq.sub[v, scale(int(Q(v)), e)]
        pairs.append((e, fv))
        rest = []
        for u in basis:
            u2 = fq.sub[fq.sub[u, scale(f(u, fv), e)], scale(f(u, e), fv)]
            rest.append(u2)
        red, piv = fq.row_reduce(np.array(rest))
        space = [red[i] for i in range(len(piv))]
        if len(space) != k - 2:
            raise NondegeneracyViolation("complement has unexpected dimension")
    return pairs


def plucker_form_Q(fq: SmallField):
    return lambda v: int(plucker_Q(fq, v))


def model_form_Q(ctx: FieldCtx):
    """Q of (V, Q) on F_q coordinates: x = sum v_i b_i, y = sum v_{3+i} b_i."""
    fq = ctx.small
    b, _ = ctx.basis

    def Q(v):
        logs = fq.vto_log(v)
        x = y = ctx.zero
        for i in range(3):
            x = ctx.add(x, ctx.mul(int(logs[i]), b[i]))
            y = ctx.add(y, ctx.mul(int(logs[3 + i]), b[i]))
        return fq.label(eval_Q(ctx, (x, y)))

    return Q


def gram_matrix(fq: SmallField, Q, vectors) -> np.ndarray:
    def f(u, v):
        return int(fq.sub[fq.sub[Q(fq.add[u, v]), Q(u)], Q(v)])

    return np.array([[f(u, v) for v in vectors] for u in vectors], dtype=np.int64)


# --- spreads -----------------------------------------------------------------------


@dataclass(frozen=True)
class SpreadModel:
    """Lines of PG(3, q) given by two spanning points each (label rows)."""

    x: np.ndarray
    y: np.ndarray

    def __len__(self) -> int:
        return len(self.x)


def _quadratic_nonresidue_poly(fq: SmallField) -> tuple[int, int]:
    """Smallest (a, b) with X^2 + aX + b irreducible over F_q."""
    lam = np.arange(fq.q)
    sq = fq.mul[lam, lam]
    for a in range(fq.q):
        for b in range(1, fq.q):
            vals = fq.add[fq.add[sq, fq.mul[a, lam]], b]
            if not (vals == 0).any():
                return a, b
    raise DomainError("no irreducible quadratic")  # pragma: no cover


def regular_spread(ctx: FieldCtx) -> SpreadModel:
    """1-dimensional F_{q^2}-subspaces of F_{q^2}^2 = F_q^4, F_{q^2} = F_q[s]/(s^2+as+b)."""
    fq = ctx.small
    a, b = _quadratic_nonresidue_poly(fq)
    xs, ys = [], []
    for u0 in range(fq.q):
        for u1 in range(fq.q):
            # (1, u) and s*(1, u) = (s, s*u), s*(u0 + u1 s) = -b u1 + (u0 - a u1) s
            xs.append((1, 0, u0, u1))
            ys.append((0, 1, int(fq.neg[fq.mul[b, u1]]), int(fq.sub[u0, fq.mul[a, u1]])))
    xs.append((0, 0, 1, 0))
    ys.append((0, 0, 0, 1))
    return SpreadModel(np.array(xs, dtype=np.int64), np.array(ys, dtype=np.int64))


def random_projectivity(fq: SmallField, rng: np.random.Generator) -> np.ndarray:
    while True:
        mat = rng.integers(0, fq.q, size=(4, 4))
        if fq.rank(mat) == 4:
            return mat.astype(np.int64)


def apply_projectivity(fq: SmallField, mat, spread: SpreadModel) -> SpreadModel:
    return SpreadModel(fq.vmatvec(mat, spread.x), fq.vmatvec(mat, spread.y))


def is_spread(fq: SmallField, spread: SpreadModel) -> bool:
    q = fq.q
    if len(spread) != q * q + 1:
        return False
    weights = q ** np.arange(4, dtype=np.int64)
    seen = np.concatenate(
        [points_of_line(fq, x, y) @ weights for x, y in zip(spread.x, spread.y)]
    )
    return len(seen) == (q * q + 1) * (q + 1) and len(np.unique(seen)) == len(seen)


def spread_plucker_keys(fq: SmallField, spread: SpreadModel) -> np.ndarray:
    return plucker_keys(fq, plucker_of_points(fq, spread.x, spread.y))


def line_class_plucker(lc: LineClassModel) -> np.ndarray:
    """Normalised Pluecker coordinates of the lines of the class."""
    return lc.ctx.small.vnormalize(to_plucker(lc.ctx, lc.xi, lc.eta))


# --- generators -----------------------------------------------------------------------


@dataclass(frozen=True)
class Generator:
    """A totally singular plane, as indices into the list of quadric points."""

    points: tuple[int, ...]
    basis: tuple[tuple[int, ...], ...]
    cls: str  # "U1" or "U2"


def _span(fq: SmallField, basis: np.ndarray) -> np.ndarray:
    k = len(basis)
    out = []
    for coeffs in itertools.product(range(fq.q), repeat=k):
        nz = [c for c in coeffs if c]
        if not nz or nz[0] != 1:
            continue
        v = np.zeros(basis.shape[1], dtype=np.int64)
        for c, b in zip(coeffs, basis):
            v = fq.add[v, fq.mul[c, b]]
        out.append(v)
    return fq.vnormalize(np.array(out))


def enumerate_generators(ctx: FieldCtx, max_q: int = 5) -> tuple[list[Generator], np.ndarray]:
    """All generators of (V, Q), in Pluecker coordinates.

    Returns the generators and the array of quadric points (normalised
    Pluecker rows) their indices refer to.
    """
    if ctx.q > max_q:
        raise TooLarge(f"generator enumeration guarded at q <= {max_q}")
    fq = ctx.small
    q = ctx.q
    xi, eta = quadric_points(ctx)
    pts = fq.vnormalize(to_plucker(ctx, xi, eta))
    weights = q ** np.arange(6, dtype=np.int64)
    keys = pts @ weights
    order = np.argsort(keys)
    pts, keys = pts[order], keys[order]
    n = len(pts)
    perp = plucker_pairing(fq, pts[:, None, :], pts[None, :, :]) == 0

    def index_of(rows):
        return np.searchsorted(keys, rows @ weights)

    u1 = set(np.flatnonzero(~pts[:, 3:].any(axis=1)).tolist())
    found: dict[tuple[int, ...], Generator] = {}
    through = np.zeros(n, dtype=np.int64)
    target = 2 * (q + 1)
    for i in range(n):
        if through[i] >= target:
            continue
        for r in np.flatnonzero(perp[i]):
            if r == i or through[i] >= target:
                continue
            line = set(index_of(_span(fq, pts[[i, r]])).tolist())
            cand = [s for s in np.flatnonzero(perp[i] & perp[r]) if s not in line]
            while cand:
                s = cand[0]
                plane = tuple(sorted(index_of(_span(fq, pts[[i, r, s]])).tolist()))
                if plane not in found:
                    meet = len(u1.intersection(plane))
                    cls = "U1" if meet in (1, q * q + q + 1) else "U2"
                    basis = tuple(tuple(int(c) for c in pts[k]) for k in (i, r, s))
                    found[plane] = Generator(plane, basis, cls)
                    through[list(plane)] += 1
                ps = set(plane)
                cand = [c for c in cand if c not in ps]
    return list(found.values()), pts


def special_generators(ctx: FieldCtx, gens: list[Generator], pts: np.ndarray) -> dict[str, Generator]:
    """Locate U1 = F_{q^3} x {0} and U2 = {0} x F_{q^3} among ``gens``."""
    out = {}
    for g in gens:
        rows = pts[list(g.points)]
        if not rows[:, 3:].any():
            out["U1"] = g
        elif not rows[:, :3].any():
            out["U2"] = g
    return out


def generator_meets(g: Generator, pts: np.ndarray, member_keys: np.ndarray, q: int) -> bool:
    weights = q ** np.arange(6, dtype=np.int64)
    return bool(np.isin(pts[list(g.points)] @ weights, member_keys).any())


def perp_all(ctx: FieldCtx, xi, eta, threads: int | None = None) -> np.ndarray:
    """|P^perp cap S| for every point P of PG(5, q)."""
    pxi, peta = all_points(ctx)
    return perp_counts(ctx, pxi, peta, xi, eta, threads=threads)


__all__ = [
    "PLUCKER_NAMES",
    "SpreadModel",
    "Generator",
    "all_points",
    "apply_projectivity",
    "canonical_points",
    "enumerate_generators",
    "enumerate_quadric_points",
    "eval_Q",
    "eval_f",
    "hyperbolic_basis",
    "is_spread",
    "line_class_plucker",
    "lines_meet",
    "perp_count",
    "plucker_keys",
    "plucker_of_points",
    "plucker_pairing",
    "plucker_to_line",
    "point_keys",
    "random_projectivity",
    "regular_spread",
    "to_plucker",
]
