"""The sets T0, L0, C0, L_x, E and the point set M of the line class.

Elements are log indices into a :class:`~clforge.field.FieldCtx`.  Points
of PG(5, q) in the model V = F_{q^3} x F_{q^3} are pairs of logs
``(xi, eta)`` brought to a canonical representative by
:func:`canonical_points`, and packed into a single integer key
``xi * q^3 + eta``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from clforge.errors import ConstructionViolation, DomainError
from clforge.field import FieldCtx


@dataclass(frozen=True)
class ConstructionModel:
    ctx: FieldCtx
    T0: np.ndarray
    L0: np.ndarray
    C0: np.ndarray
    Lx: dict[int, tuple[int, ...]]
    E: np.ndarray
    beta: int
    gamma: int
    x_param: int


@dataclass(frozen=True)
class LineClassModel:
    """The tight set M (canonical points) and the vector set D."""

    construction: ConstructionModel
    xi: np.ndarray
    eta: np.ndarray
    keys: np.ndarray = field(repr=False)  # sorted

    @property
    def ctx(self) -> FieldCtx:
        return self.construction.ctx

    @property
    def x_param(self) -> int:
        return self.construction.x_param

    def __len__(self) -> int:
        return len(self.keys)

    def contains(self, xi, eta) -> np.ndarray:
        cxi, ceta = canonical_points(self.ctx, xi, eta)
        keys = point_keys(self.ctx, cxi, ceta)
        idx = np.searchsorted(self.keys, keys)
        idx = np.minimum(idx, len(self.keys) - 1)
        return self.keys[idx] == keys


def x_parameter(q: int) -> int:
    return (q + 1) ** 2 // 3


def beta_gamma(ctx: FieldCtx) -> tuple[int, int]:
    """Logs of beta = -1/3 and gamma = beta^-3 = -27 in F_q."""
    beta = ctx.neg(ctx.inv(ctx.from_int(3)))
    gamma = ctx.pow(beta, -3)
    return beta, gamma


# --- T0, L0, C0 ---------------------------------------------------------------


def build_T0_L0_C0(ctx: FieldCtx) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    logs = np.arange(ctx.order, dtype=np.int64)
    T0 = logs[ctx.trace_zero[: ctx.order] == 1]
    L0 = T0[T0 % (ctx.q - 1) == 0]
    C0 = (ctx.q - 1) * np.arange(ctx.N, dtype=np.int64)
    return T0, L0, C0


def _z_of(ctx: FieldCtx, x: int) -> int:
    return ctx.sub(ctx.frob(x, 1), ctx.frob(x, 2))


def _check_L0(ctx: FieldCtx, x: int) -> None:
    if x == ctx.zero or ctx.trace_rel(x) != ctx.zero or ctx.norm_rel(x) != 0:
        raise DomainError(f"w^{x} is not in L0")


def multiset_Wx(ctx: FieldCtx, x: int) -> Counter:
    """Multiset [N(l+z)] + [gamma N(l+z)^-1] over l in F_q, z = x^q - x^(q^2)."""
    _check_L0(ctx, x)
    _, gamma = beta_gamma(ctx)
    z = _z_of(ctx, x)
    norms = ctx.vnorm(ctx.vadd(ctx.fq_all, z))
    if (norms == ctx.zero).any():
        raise ConstructionViolation("norm of l + z vanished")
    inv = (gamma - norms) % ctx.order
    return Counter(norms.tolist()) + Counter(inv.tolist())


def extract_Lx(ctx: FieldCtx, Wx: Counter) -> tuple[int, ...]:
    """L_x = cube roots of the elements of multiplicity 4 in W_x."""
    if any(c not in (1, 4) for c in Wx.values()) or len(Wx) != ctx.q - 1:
        raise ConstructionViolation(f"unexpected multiplicities {sorted(set(Wx.values()))}")
    return tuple(sorted(ctx.cube_root(a) for a, c in Wx.items() if c == 4))


def c_alpha(ctx: FieldCtx, x: int, alpha: int) -> int:
    _check_L0(ctx, x)
    _, gamma = beta_gamma(ctx)
    z = _z_of(ctx, x)
    norms = ctx.vnorm(ctx.vadd(ctx.fq_all, z))
    first = int(np.count_nonzero(norms == alpha))
    second = int(np.count_nonzero((gamma - norms) % ctx.order == alpha))
    return first + second


def build_construction(ctx: FieldCtx) -> ConstructionModel:
    T0, L0, C0 = build_T0_L0_C0(ctx)
    beta, gamma = beta_gamma(ctx)
    Lx = {int(x): extract_Lx(ctx, multiset_Wx(ctx, int(x))) for x in L0}
    E = np.array(sorted({ctx.mul(x, a) for x, La in Lx.items() for a in La}), dtype=np.int64)
    return ConstructionModel(ctx, T0, L0, C0, Lx, E, beta, gamma, x_parameter(ctx.q))


def build_E(ctx: FieldCtx) -> np.ndarray:
    return build_construction(ctx).E


def keyodd_multisets(ctx: FieldCtx, model: ConstructionModel) -> tuple[Counter, Counter]:
    """The multisets D1 and D2 over (x, l) in L0 x F_q."""
    D1: Counter = Counter()
    D2: Counter = Counter()
    binv = ctx.inv(model.beta)
    for x in model.L0.tolist():
        z = _z_of(ctx, x)
        roots = (ctx.vnorm(ctx.vadd(ctx.fq_all, z)) * ctx.cube_exp) % ctx.order
        D1.update(((x + roots) % ctx.order).tolist())
        D2.update(((binv + x - roots) % ctx.order).tolist())
    return D1, D2


def verify_keyodd_identity(ctx: FieldCtx, model: ConstructionModel | None = None) -> bool:
    """D1 + D2 == 3E + T0 as multisets."""
    model = model or build_construction(ctx)
    D1, D2 = keyodd_multisets(ctx, model)
    rhs = Counter({int(e): 3 for e in model.E})
    rhs.update(model.T0.tolist())
    return (D1 + D2) == rhs


def mu_counts(ctx: FieldCtx, z: int, beta: int | None = None) -> tuple[int, int]:
    """(mu_z, mu'_z): number of l in F_q with  zz - l  in C0, resp. beta*zz - l."""
    if beta is None:
        beta, _ = beta_gamma(ctx)
    zz = _z_of(ctx, z)
    lam = ctx.vneg(ctx.fq_all)
    out = []
    for target in (zz, ctx.mul(beta, zz)):
        vals = ctx.vadd(lam, target)
        out.append(int(np.count_nonzero((vals != ctx.zero) & (vals % (ctx.q - 1) == 0))))
    return out[0], out[1]


# --- points -----------------------------------------------------------------


def canonical_points(ctx: FieldCtx, xi, eta) -> tuple[np.ndarray, np.ndarray]:
    """Canonical representatives of projective points <(xi, eta)>.

    F_q^* scaling moves a log by multiples of N, so the representative with
    the first nonzero component's log in [0, N) is unique.
    """
    xi = np.asarray(xi, dtype=np.int64)
    eta = np.asarray(eta, dtype=np.int64)
    zero, order, N = ctx.zero, ctx.order, ctx.N
    xi_zero = xi == zero
    if (xi_zero & (eta == zero)).any():
        raise DomainError("zero vector has no projective point")
    shift = np.where(xi_zero, (eta % N) - eta, (xi % N) - xi)
    new_xi = np.where(xi_zero, zero, xi % N)
    new_eta = np.where(eta == zero, zero, (eta + shift) % order)
    return new_xi, new_eta


def point_keys(ctx: FieldCtx, xi, eta) -> np.ndarray:
    return np.asarray(xi, dtype=np.int64) * ctx.q3 + np.asarray(eta, dtype=np.int64)


def split_keys(ctx: FieldCtx, keys) -> tuple[np.ndarray, np.ndarray]:
    keys = np.asarray(keys, dtype=np.int64)
    return keys // ctx.q3, keys % ctx.q3


def build_orbit(ctx: FieldCtx, z: int) -> np.ndarray:
    """Sorted keys of the C0-orbit of <(1, z)>."""
    mu = (ctx.q - 1) * np.arange(ctx.N, dtype=np.int64)
    eta = ctx.vmul(-mu % ctx.order, z)
    return np.sort(point_keys(ctx, *canonical_points(ctx, mu, eta)))


def build_M(ctx: FieldCtx, model: ConstructionModel | None = None) -> LineClassModel:
    model = model or build_construction(ctx)
    orbits = [build_orbit(ctx, int(z)) for z in model.E]
    keys = np.concatenate(orbits) if orbits else np.zeros(0, dtype=np.int64)
    keys.sort()
    if len(keys) > 1 and (np.diff(keys) == 0).any():
        raise ConstructionViolation("orbits of distinct elements of E overlap")
    xi, eta = split_keys(ctx, keys)
    return LineClassModel(model, xi, eta, keys)


def build_D(lc: LineClassModel) -> tuple[np.ndarray, np.ndarray]:
    """All F_q^* multiples of the representatives of M."""
    ctx = lc.ctx
    shifts = ctx.fq_star
    X = ctx.vmul(lc.xi[:, None], shifts[None, :]).ravel()
    Y = ctx.vmul(lc.eta[:, None], shifts[None, :]).ravel()
    return X, Y


def all_points(ctx: FieldCtx) -> tuple[np.ndarray, np.ndarray]:
    """Canonical representatives of all (q^6-1)/(q-1) points of PG(5, q)."""
    N, q3, zero = ctx.N, ctx.q3, ctx.zero
    head_xi = np.full(N, zero, dtype=np.int64)
    head_eta = np.arange(N, dtype=np.int64)
    xi = np.repeat(np.arange(N, dtype=np.int64), q3)
    eta = np.tile(np.arange(q3, dtype=np.int64), N)  # index q3-1 is the zero sentinel
    return np.concatenate([head_xi, xi]), np.concatenate([head_eta, eta])


def quadric_points(ctx: FieldCtx) -> tuple[np.ndarray, np.ndarray]:
    xi, eta = all_points(ctx)
    keep = ctx.trace_zero[ctx.vmul(xi, eta)] == 1
    return xi[keep], eta[keep]
