"""The localization C[h][delta^{-1}] over Q(c): fractions p / delta^k."""

from __future__ import annotations

from functools import lru_cache

from .errors import ArityMismatch, WrongVariableFamily
from .poly import Perm, Poly, delta, delta_over_root, delta_partial, delta_power, render_poly
from .scalar import K


def strip_delta(p: Poly, k: int) -> tuple[Poly, int]:
    """Divide out the largest power of delta (at most delta^k) from p."""
    if p.is_zero():
        return Poly.zero(p.n), 0
    d = delta(p.n)
    while k > 0:
        q = p.divide_exact(d)
        if q is None:
            break
        p, k = q, k - 1
    return p, k


class LocFrac:
    """``num / delta^k`` with num in the x-variables and delta not dividing num when k > 0."""

    __slots__ = ("num", "k", "_hash")

    def __init__(self, num: Poly, k: int = 0, *, _normal=False):
        if not _normal:
            if not num.is_x_only():
                raise WrongVariableFamily("LocFrac numerators live in the x-variables only")
            if k < 0:
                num, k = num * delta_power(num.n, -k), 0
            num, k = strip_delta(num, k)
        self.num = num
        self.k = k
        self._hash = None

    @property
    def n(self) -> int:
        return self.num.n

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, n):
        return cls(Poly.zero(n), 0, _normal=True)

    @classmethod
    def one(cls, n):
        return cls(Poly.one(n), 0, _normal=True)

    @classmethod
    def constant(cls, n, value):
        return cls(Poly.constant(n, value), 0, _normal=True)

    @classmethod
    def x(cls, n, i):
        return cls(Poly.x(n, i), 0, _normal=True)

    @classmethod
    def delta_pow(cls, n, k: int):
        """delta^k for any integer k."""
        if k >= 0:
            return cls(delta_power(n, k), 0, _normal=True)
        return cls(Poly.one(n), -k, _normal=True)

    @classmethod
    def inverse_root(cls, n, i, j, power=1):
        """1 / (x_i - x_j)^power, written as (delta/(x_i-x_j))^power / delta^power."""
        return cls(delta_over_root(n, i, j) ** power, power)

    @classmethod
    def log_derivative(cls, n, i):
        """(d_i delta) / delta."""
        return _log_derivative(n, i)

    # -- queries ------------------------------------------------------
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.k == 0 and self.num == Poly.one(self.n)

    def is_constant(self) -> bool:
        return self.k == 0 and self.num.is_constant()

    def coefficients(self):
        return self.num.terms.values()

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other: "LocFrac") -> "LocFrac":
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        return sum_fracs([(self.num, self.k), (other.num, other.k)], self.n)

    def __neg__(self):
        return LocFrac(-self.num, self.k, _normal=True)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other) -> "LocFrac":
        if isinstance(other, LocFrac):
            if self.num.n != other.num.n:
                raise ArityMismatch("n mismatch")
            if self.k == 0 and other.k == 0:
                return LocFrac(self.num * other.num, 0, _normal=True)
            return LocFrac(self.num * other.num, self.k + other.k)
        return self.scale(other)

    __rmul__ = __mul__

    def scale(self, s) -> "LocFrac":
        s = K(s)
        if s.is_zero():
            return LocFrac.zero(self.n)
        return LocFrac(self.num.scale(s), self.k, _normal=True)

    def map_coefficients(self, fn) -> "LocFrac":
        return LocFrac(self.num.map_coefficients(fn), self.k)

    def derivative(self, i: int) -> "LocFrac":
        """d/dx_i by the quotient rule."""
        n = self.n
        if not 1 <= i <= n:
            raise ArityMismatch(f"index {i} out of range for n={n}")
        if self.k == 0:
            return LocFrac(self.num.partial("x", i), 0, _normal=True)
        # d(p d^-k) = (d p) d^-k - k p (d delta) d^-k-1
        top = self.num.partial("x", i) * delta(n) - self.num * delta_partial(n, i).scale(self.k)
        return LocFrac(top, self.k + 1)

    def derivative_multi(self, a: tuple) -> "LocFrac":
        return _derivative_multi(self, a)

    def act(self, w: Perm) -> "LocFrac":
        """w . (p / delta^k) = (w.p) sign(w)^k / delta^k."""
        if w.is_identity():
            return self
        num = self.num.act(w)
        if self.k % 2 and w.sign < 0:
            num = -num
        return LocFrac(num, self.k, _normal=True)

    def evaluate_c(self, r) -> "LocFrac":
        return LocFrac(self.num.map_coefficients(lambda v: v.evaluate_at(r)), self.k)

    # -- comparison ---------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, LocFrac):
            return self.k == other.k and self.num == other.num
        return NotImplemented

    def __hash__(self):
        h = self._hash
        if h is None:
            h = self._hash = hash((self.k, self.num))
        return h

    def __repr__(self):
        return f"LocFrac({self})"

    def __str__(self):
        body = render_poly(self.num)
        if self.k == 0:
            return body
        if len(self.num.terms) > 1:
            body = f"({body})"
        return f"{body} / del" + (f"^{self.k}" if self.k > 1 else "")


def sum_fracs(parts, n) -> LocFrac:
    """Sum of raw (numerator, k) pairs over the common denominator, normalized once."""
    parts = [(p, k) for p, k in parts if not p.is_zero()]
    if not parts:
        return LocFrac.zero(n)
    top = max(k for _, k in parts)
    acc: dict = {}
    for p, k in parts:
        if k != top:
            p = p * delta_power(n, top - k)
        for e, v in p.terms.items():
            w = acc.get(e)
            acc[e] = v if w is None else w + v
    num = Poly(n, {e: v for e, v in acc.items() if not v.is_zero()}, _clean=True)
    if top == 0:
        return LocFrac(num, 0, _normal=True)
    return LocFrac(num, top)


@lru_cache(maxsize=None)
def _log_derivative(n, i) -> LocFrac:
    return LocFrac(delta_partial(n, i), 1)


@lru_cache(maxsize=200_000)
def _derivative_multi(f: LocFrac, a: tuple) -> LocFrac:
    if not any(a):
        return f
    i = max(j for j, e in enumerate(a) if e)
    prev = list(a)
    prev[i] -= 1
    return _derivative_multi(f, tuple(prev)).derivative(i + 1)


# plain-function wrappers -------------------------------------------------------


def loc_normalize(p: Poly, k: int) -> LocFrac:
    return LocFrac(p, k)


def loc_arith(f: LocFrac, g: LocFrac, op: str) -> LocFrac:
    if f.n != g.n:
        raise ArityMismatch("n mismatch")
    if op == "add":
        return f + g
    if op == "mul":
        return f * g
    raise ValueError(f"unknown op {op!r}")


def loc_derivative(f: LocFrac, i: int) -> LocFrac:
    return f.derivative(i)

