"""Named operators of the rational Cherednik algebra of type A inside D(h^reg) * W."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import ArityMismatch
from .locfrac import LocFrac
from .poly import Perm, all_perms
from .scalar import C, FieldScalar, K
from .skew import SkewOperator, add_all, conjugate_by_delta_power, skew_mul, twist_derivatives


@dataclass(frozen=True)
class CherednikContext:
    n: int
    kappa: FieldScalar = C

    def __post_init__(self):
        if self.n < 2:
            raise ArityMismatch(f"rank must be at least 2, got n={self.n}")
        object.__setattr__(self, "kappa", K(self.kappa))


def _root_pairs(n):
    return [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]


def dunkl(ctx: CherednikContext, i: int) -> SkewOperator:
    """D_kappa(y_i) = d_i - kappa sum_{k != i} 1/(x_i - x_k) (1 - s_ik)."""
    return _dunkl(ctx.n, ctx.kappa, i)


@lru_cache(maxsize=256)
def _dunkl(n: int, kappa: FieldScalar, i: int) -> SkewOperator:
    if not 1 <= i <= n:
        raise ArityMismatch(f"Dunkl index {i} out of range for n={n}")
    parts = [SkewOperator.d(n, i)]
    if not kappa.is_zero():
        for k in range(1, n + 1):
            if k == i:
                continue
            inv = SkewOperator.from_locfrac(LocFrac.inverse_root(n, i, k).scale(-kappa))
            refl = SkewOperator.one(n) - SkewOperator.group(Perm.transposition(n, i, k))
            parts.append(skew_mul(inv, refl))
    return add_all(parts)


@lru_cache(maxsize=None)
def idempotent(n: int, kind: str = "triv") -> SkewOperator:
    if kind not in ("triv", "sign"):
        raise ValueError(f"unknown idempotent kind {kind!r}")
    perms = all_perms(n)
    weight = Fraction(1, len(perms))
    return add_all([SkewOperator.group(w, weight * (w.sign if kind == "sign" else 1)) for w in perms])


def nabla2(ctx: CherednikContext) -> SkewOperator:
    """sum_i D_kappa(y_i)^2."""
    return _nabla2(ctx.n, ctx.kappa)


@lru_cache(maxsize=64)
def _nabla2(n, kappa):
    ds = [_dunkl(n, kappa, i) for i in range(1, n + 1)]
    return add_all([skew_mul(d, d) for d in ds])


def laplacian(n: int) -> SkewOperator:
    return add_all([SkewOperator.d_monomial(n, tuple(2 if k == i else 0 for k in range(n))) for i in range(n)])


def _inverse_square_sum(n: int) -> LocFrac:
    """sum over both signs of every root of 1/alpha^2."""
    out = LocFrac.zero(n)
    for i, j in _root_pairs(n):
        out = out + LocFrac.inverse_root(n, i, j, 2)
    return out


def calogero_moser(n: int, w) -> SkewOperator:
    """L_w = Delta - 1/2 sum_{alpha in R} w(w+1) (alpha, alpha) / alpha^2 with (alpha, alpha) = 2."""
    w = K(w)
    pot = _inverse_square_sum(n).scale(-(w * (w + 1)))
    return laplacian(n) + SkewOperator.from_locfrac(pot)


def theta_spher(u: SkewOperator, w) -> SkewOperator:
    """Conjugation u -> delta^{-w} u delta^{w} for a formal or rational exponent w."""
    return conjugate_by_delta_power(u, w)


def phi_twist(u: SkewOperator, kappa=C) -> SkewOperator:
    """The automorphism phi_kappa: H_kappa -> H_{-kappa} extended to D(h^reg) * W.

    Functions are fixed, w -> sign(w) w and d_i -> d_i + 2 kappa (d_i delta)/delta,
    so that D_kappa(y) -> D_{-kappa}(y).
    """
    kappa = K(kappa)
    return twist_derivatives(u, kappa * 2, lambda g: g.sign)


def radial_rhs(n: int, w) -> SkewOperator:
    """delta^{-w} Delta delta^{w} + sum_R delta^{-w} (1/alpha) d_alpha delta^{w} - sum_R w(w+1)/alpha^2."""
    w = K(w)
    first_order = []
    for i, j in _root_pairs(n):
        d_alpha = SkewOperator.d(n, i) - SkewOperator.d(n, j)
        first_order.append(skew_mul(SkewOperator.from_locfrac(LocFrac.inverse_root(n, i, j)), d_alpha))
    body = laplacian(n) + add_all(first_order)
    pot = _inverse_square_sum(n).scale(-(w * (w + 1)))
    return conjugate_by_delta_power(body, w) + SkewOperator.from_locfrac(pot)


def is_good(r, n: int) -> bool:
    """False exactly when -1 < r < 0 and r*b is an integer for some 2 <= b <= n."""
    r = Fraction(r)
    if not -1 < r < 0:
        return True
    return not any((r * b).denominator == 1 for b in range(2, n + 1))


__all__ = [
    "CherednikContext",
    "calogero_moser",
    "dunkl",
    "idempotent",
    "is_good",
    "laplacian",
    "nabla2",
    "phi_twist",
    "radial_rhs",
    "theta_spher",
]
