"""Normal-form arithmetic in D(h^reg) * W over Q(c).

An operator is a finite sum of terms ``f * d^a * w`` with a coefficient
``f`` in C[h][delta^{-1}] on the left, a monomial in the partial derivatives
in the middle and a permutation on the right.  Products are brought back to
this shape with the Leibniz rule and the skew relation ``w D = (w.D) w``.
"""

from __future__ import annotations

from collections import defaultdict
from fractions import Fraction
from itertools import product as iproduct
from math import comb, factorial

from .errors import ArityMismatch, NotSpherical, OddPermutationUnderFormalTwist, ZeroOperator
from .locfrac import LocFrac, strip_delta, sum_fracs
from .poly import Perm, Poly, all_perms, delta_degree, delta_power
from .scalar import ONE, FieldScalar, K


def _zero_exp(n):
    return (0,) * n


def _unit_exp(n, i):
    e = [0] * n
    e[i - 1] = 1
    return tuple(e)


def _sub_indices(a: tuple):
    return iproduct(*(range(k + 1) for k in a))


class SkewOperator:
    """Element of D(h^reg) * W in normal form; immutable."""

    __slots__ = ("n", "terms", "_hash")

    def __init__(self, n: int, terms: dict | None = None, *, _clean=False):
        self.n = n
        if terms is None:
            terms = {}
        elif not _clean:
            terms = {(tuple(a), Perm(w)): f for (a, w), f in terms.items() if not f.is_zero()}
        self.terms = terms
        self._hash = None

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, n):
        return cls(n, {}, _clean=True)

    @classmethod
    def from_locfrac(cls, f: LocFrac):
        if f.is_zero():
            return cls.zero(f.n)
        return cls(f.n, {(_zero_exp(f.n), Perm.identity(f.n)): f}, _clean=True)

    @classmethod
    def scalar(cls, n, value):
        return cls.from_locfrac(LocFrac.constant(n, K(value)))

    @classmethod
    def one(cls, n):
        return cls.scalar(n, ONE)

    @classmethod
    def x(cls, n, i):
        return cls.from_locfrac(LocFrac.x(n, i))

    @classmethod
    def d(cls, n, i):
        """The plain partial derivative d/dx_i."""
        if not 1 <= i <= n:
            raise ArityMismatch(f"d{i} out of range for n={n}")
        return cls(n, {(_unit_exp(n, i), Perm.identity(n)): LocFrac.one(n)}, _clean=True)

    @classmethod
    def d_monomial(cls, n, a: tuple):
        return cls(n, {(tuple(a), Perm.identity(n)): LocFrac.one(n)}, _clean=True)

    @classmethod
    def group(cls, w: Perm, coeff=ONE):
        n = len(w)
        f = LocFrac.constant(n, coeff)
        if f.is_zero():
            return cls.zero(n)
        return cls(n, {(_zero_exp(n), Perm(w)): f}, _clean=True)

    @classmethod
    def delta_pow(cls, n, k: int):
        return cls.from_locfrac(LocFrac.delta_pow(n, k))

    # -- queries ------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_group_free(self) -> bool:
        return all(w.is_identity() for _, w in self.terms)

    def is_scalar(self) -> bool:
        if len(self.terms) != 1:
            return not self.terms
        (a, w), f = next(iter(self.terms.items()))
        return not any(a) and w.is_identity() and f.is_constant()

    def scalar_value(self) -> FieldScalar:
        if not self.terms:
            return K(0)
        (_, _), f = next(iter(self.terms.items()))
        return f.num.constant_term()

    def gamma_degree(self) -> int:
        return max((sum(a) for a, _ in self.terms), default=-1)

    def sorted_terms(self):
        """Canonical order: descending d-order, then d-exponent, then permutation images."""
        return sorted(self.terms.items(), key=lambda t: (-sum(t[0][0]), tuple(-k for k in t[0][0]), t[0][1]))

    # -- linear structure --------------------------------------------
    def _check(self, other):
        if not isinstance(other, SkewOperator):
            raise TypeError(f"expected SkewOperator, got {type(other).__name__}")
        if other.n != self.n:
            raise ArityMismatch(f"n mismatch: {self.n} vs {other.n}")

    def __add__(self, other):
        if not isinstance(other, SkewOperator):
            other = SkewOperator.scalar(self.n, other)
        self._check(other)
        return add_all([self, other])

    __radd__ = __add__

    def __neg__(self):
        return SkewOperator(self.n, {k: -f for k, f in self.terms.items()}, _clean=True)

    def __sub__(self, other):
        if not isinstance(other, SkewOperator):
            other = SkewOperator.scalar(self.n, other)
        return self + (-other)

    def __rsub__(self, other):
        return SkewOperator.scalar(self.n, other) - self

    def scale(self, s) -> "SkewOperator":
        s = K(s)
        if s.is_zero():
            return SkewOperator.zero(self.n)
        return SkewOperator(self.n, {k: f.scale(s) for k, f in self.terms.items()}, _clean=True)

    def __mul__(self, other):
        if isinstance(other, SkewOperator):
            return skew_mul(self, other)
        if isinstance(other, LocFrac):
            return skew_mul(self, SkewOperator.from_locfrac(other))
        return self.scale(other)

    def __rmul__(self, other):
        if isinstance(other, LocFrac):
            return skew_mul(SkewOperator.from_locfrac(other), self)
        return self.scale(other)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers of operators are not defined")
        out = SkewOperator.one(self.n)
        for _ in range(k):
            out = skew_mul(out, self)
        return out

    def map_coefficients(self, fn) -> "SkewOperator":
        """Apply a map Q(c) -> Q(c) to every scalar coefficient."""
        out = {}
        for key, f in self.terms.items():
            g = f.map_coefficients(fn)
            if not g.is_zero():
                out[key] = g
        return SkewOperator(self.n, out, _clean=True)

    # -- equality ----------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, SkewOperator):
            return self.n == other.n and self.terms == other.terms
        if isinstance(other, (int, Fraction, FieldScalar)):
            return self == SkewOperator.scalar(self.n, other)
        return NotImplemented

    def __hash__(self):
        h = self._hash
        if h is None:
            h = self._hash = hash((self.n, frozenset(self.terms.items())))
        return h

    def __repr__(self):
        return f"SkewOperator(n={self.n}, {self})"

    def __str__(self):
        from .expr import render

        return render(self)

    # -- operations delegated to module functions --------------------
    def apply(self, f: LocFrac) -> LocFrac:
        return apply(self, f)

    def principal_symbol(self) -> "SymbolElement":
        return principal_symbol(self)


def add_all(ops) -> SkewOperator:
    ops = list(ops)
    n = ops[0].n
    acc: dict = defaultdict(list)
    for u in ops:
        if u.n != n:
            raise ArityMismatch("n mismatch")
        for key, f in u.terms.items():
            acc[key].append((f.num, f.k))
    return _assemble(n, acc)


def _assemble(n, acc) -> SkewOperator:
    out = {}
    for key, parts in acc.items():
        if len(parts) == 1:
            p, k = parts[0]
            f = LocFrac(p, k) if k else LocFrac(p, 0, _normal=True)
        else:
            f = sum_fracs(parts, n)
        if not f.is_zero():
            out[key] = f
    return SkewOperator(n, out, _clean=True)


# ---------------------------------------------------------------------------
# multiplication


def skew_mul(u: SkewOperator, v: SkewOperator) -> SkewOperator:
    """Normal form of u*v.

    (f d^a w)(g d^b s) = sum_{beta <= a} C(a, beta) f d^{a-beta}(w.g) d^{beta + w(b)} (w s)
    """
    if u.n != v.n:
        raise ArityMismatch(f"n mismatch: {u.n} vs {v.n}")
    n = u.n
    acc: dict = defaultdict(list)
    for (a, w), f in u.terms.items():
        subs = [(beta, _binom(a, beta), tuple(x - y for x, y in zip(a, beta))) for beta in _sub_indices(a)]
        for (b, s), g in v.terms.items():
            wg = g.act(w)
            wb = w.permute(b)
            ws = w * s
            for beta, coef, rest in subs:
                dg = wg.derivative_multi(rest) if any(rest) else wg
                if dg.is_zero():
                    continue
                num = f.num * dg.num
                if coef != 1:
                    num = num.scale(coef)
                acc[(tuple(x + y for x, y in zip(beta, wb)), ws)].append((num, f.k + dg.k))
    return _assemble(n, acc)


def _binom(a, beta) -> int:
    out = 1
    for x, y in zip(a, beta):
        out *= comb(x, y)
    return out


def commutator(u: SkewOperator, v: SkewOperator) -> SkewOperator:
    return skew_mul(u, v) - skew_mul(v, u)


# ---------------------------------------------------------------------------
# action on functions


def apply(u: SkewOperator, f: LocFrac) -> LocFrac:
    """Natural action on C[h^reg]: group elements act, then derivatives, then coefficients."""
    if u.n != f.n:
        raise ArityMismatch("n mismatch")
    parts = []
    for (a, w), coeff in u.terms.items():
        g = f.act(w).derivative_multi(a)
        if not g.is_zero():
            parts.append((coeff.num * g.num, coeff.k + g.k))
    return sum_fracs(parts, u.n)


# ---------------------------------------------------------------------------
# filtration and symbols


def gamma_degree(u: SkewOperator) -> int:
    return u.gamma_degree()


class SymbolElement:
    """Element of C[h^reg x h^*] * W: keys (y-exponent, perm) -> LocFrac coefficient."""

    __slots__ = ("n", "terms")

    def __init__(self, n, terms):
        self.n = n
        self.terms = {k: f for k, f in terms.items() if not f.is_zero()}

    def __mul__(self, other: "SymbolElement") -> "SymbolElement":
        acc: dict = defaultdict(list)
        for (a, w), f in self.terms.items():
            for (b, s), g in other.terms.items():
                h = f * g.act(w)
                acc[(tuple(x + y for x, y in zip(a, w.permute(b))), w * s)].append((h.num, h.k))
        return SymbolElement(self.n, {k: sum_fracs(v, self.n) for k, v in acc.items()})

    def __eq__(self, other):
        return isinstance(other, SymbolElement) and self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def is_zero(self):
        return not self.terms

    def component(self, w: Perm) -> dict:
        return {b: f for (b, v), f in self.terms.items() if v == w}

    def __repr__(self):
        return f"SymbolElement({self.terms})"


def principal_symbol(u: SkewOperator) -> SymbolElement:
    if u.is_zero():
        raise ZeroOperator("the zero operator has no principal symbol")
    top = u.gamma_degree()
    return SymbolElement(u.n, {(a, w): f for (a, w), f in u.terms.items() if sum(a) == top})


class SymbolFraction:
    """A function on h^reg x h^*: numerator in x and y over delta^k, delta-reduced."""

    __slots__ = ("num", "k")

    def __init__(self, num: Poly, k: int = 0, *, _normal=False):
        if not _normal:
            if k < 0:
                num, k = num * delta_power(num.n, -k), 0
            num, k = strip_delta(num, k)
        self.num = num
        self.k = k

    @property
    def n(self):
        return self.num.n

    def is_zero(self):
        return self.num.is_zero()

    def __mul__(self, other):
        if isinstance(other, SymbolFraction):
            return SymbolFraction(self.num * other.num, self.k + other.k)
        return SymbolFraction(self.num.scale(other), self.k, _normal=True)

    def __add__(self, other):
        top = max(self.k, other.k)
        a = self.num * delta_power(self.n, top - self.k) if top != self.k else self.num
        b = other.num * delta_power(self.n, top - other.k) if top != other.k else other.num
        return SymbolFraction(a + b, top)

    def __neg__(self):
        return SymbolFraction(-self.num, self.k, _normal=True)

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        return isinstance(other, SymbolFraction) and self.k == other.k and self.num == other.num

    def __hash__(self):
        return hash((self.k, self.num))

    def act(self, w: Perm) -> "SymbolFraction":
        num = self.num.act(w)
        if self.k % 2 and w.sign < 0:
            num = -num
        return SymbolFraction(num, self.k, _normal=True)

    def rescaled(self, k: int) -> Poly:
        """Numerator over delta^k (k >= self.k)."""
        if k < self.k:
            raise ValueError("cannot lower the delta-power of a reduced fraction")
        if k == self.k:
            return self.num
        return self.num * delta_power(self.n, k - self.k)

    def bidegree_components(self) -> list[tuple[tuple[int, int], "SymbolFraction"]]:
        """Components by (x-degree, y-degree); x-degree counts delta^-k as -k*deg(delta)."""
        shift = self.k * delta_degree(self.n)
        out = []
        for (i, j), part in self.num.bidegree_components():
            out.append(((i - shift, j), SymbolFraction(part, self.k, _normal=True)))
        return out

    def __str__(self):
        body = str(self.num)
        if self.k == 0:
            return body
        if len(self.num.terms) > 1:
            body = f"({body})"
        return f"{body} / del" + (f"^{self.k}" if self.k > 1 else "")

    def __repr__(self):
        return f"SymbolFraction({self})"


def symbol_component_fraction(n: int, comp: dict) -> SymbolFraction:
    """Turn {y-exponent: LocFrac} into one x,y fraction."""
    parts = []
    for b, f in comp.items():
        parts.append((f.num.mul_monomial((0,) * n + tuple(b)), f.k))
    if not parts:
        return SymbolFraction(Poly.zero(n), 0, _normal=True)
    top = max(k for _, k in parts)
    acc = Poly.zero(n)
    for p, k in parts:
        acc = acc + (p * delta_power(n, top - k) if k != top else p)
    return SymbolFraction(acc, top)


def spherical_scalar_symbol(u: SkewOperator) -> SymbolFraction:
    """The W-invariant p with principal_symbol(u) = p * e.

    Raises :class:`NotSpherical` unless every group component of the symbol is
    the same invariant function (up to the 1/n! of e).
    """
    sym = principal_symbol(u)
    n = u.n
    perms = all_perms(n)
    comps = {w: {} for w in perms}
    for (b, w), f in sym.terms.items():
        comps[w][b] = f
    base = comps[perms[0]]
    for w in perms[1:]:
        if comps[w] != base:
            raise NotSpherical(f"group component at {w.images()} differs from the identity component")
    p = symbol_component_fraction(n, base) * K(factorial(n))
    for w in perms:
        if p.act(w) != p:
            raise NotSpherical(f"scalar symbol is not invariant under {w.images()}")
    return p


# ---------------------------------------------------------------------------
# conjugation by powers of delta and specialization


def conjugate_by_delta_power(u: SkewOperator, w) -> SkewOperator:
    """delta^{-w} u delta^{w} for w in Q(c).

    Each d_i becomes d_i + w (d_i delta)/delta; a group element g picks up
    sign(g)^w, which is only meaningful for even g or integer w.
    """
    w = K(w)
    if w.is_zero():
        return u
    integral = w.is_integer()
    odd = integral and int(w.constant_value()) % 2 == 1

    def group_factor(g: Perm) -> int:
        if g.sign > 0:
            return 1
        if not integral:
            raise OddPermutationUnderFormalTwist(f"odd permutation {g.images()} under conjugation by delta^({w})")
        return -1 if odd else 1

    return twist_derivatives(u, w, group_factor)


def twist_derivatives(u: SkewOperator, w, group_factor) -> SkewOperator:
    """Rebuild u with d_i -> d_i + w (d_i delta)/delta and g -> group_factor(g) g."""
    w = K(w)
    n = u.n
    shifted = [None] + [
        SkewOperator.d(n, i) + SkewOperator.from_locfrac(LocFrac.log_derivative(n, i).scale(w))
        for i in range(1, n + 1)
    ]
    cache: dict = {}

    def dpow(a):
        got = cache.get(a)
        if got is None:
            got = SkewOperator.one(n)
            for i, k in enumerate(a, start=1):
                for _ in range(k):
                    got = skew_mul(got, shifted[i])
            cache[a] = got
        return got

    pieces = []
    for (a, g), f in u.terms.items():
        sgn = group_factor(g)
        coeff = f if sgn == 1 else -f
        pieces.append(_left_coeff_right_group(coeff, dpow(a), g))
    if not pieces:
        return u
    return add_all(pieces)


def _left_coeff_right_group(f: LocFrac, core: SkewOperator, g: Perm) -> SkewOperator:
    """f * core * g for a group-free core, without a general product."""
    n = core.n
    acc: dict = defaultdict(list)
    for (a, _), h in core.terms.items():
        acc[(a, g)].append((f.num * h.num, f.k + h.k))
    return _assemble(n, acc)


def specialize_c(u: SkewOperator, r) -> SkewOperator:
    r = Fraction(r)
    return u.map_coefficients(lambda v: K(v.evaluate_at(r)))


def substitute_c(u: SkewOperator, g) -> SkewOperator:
    """Replace the formal parameter c by g in every coefficient."""
    g = K(g)
    return u.map_coefficients(lambda v: v.substitute(g))


# ---------------------------------------------------------------------------
# helpers for e-sandwiched computations


def collapse_right_e(u: SkewOperator) -> SkewOperator:
    """Group-free P with u*e = P*e (sum the group components)."""
    n = u.n
    acc: dict = defaultdict(list)
    ident = Perm.identity(n)
    for (a, _), f in u.terms.items():
        acc[(a, ident)].append((f.num, f.k))
    return _assemble(n, acc)


def act_on_operator(w: Perm, u: SkewOperator) -> SkewOperator:
    """w u w^{-1}: coefficients by the group action, derivatives permuted, group conjugated."""
    n = u.n
    winv = w.inverse()
    return SkewOperator(
        n,
        {(w.permute(a), w * g * winv): f.act(w) for (a, g), f in u.terms.items()},
        _clean=True,
    )


def symmetrize(u: SkewOperator) -> SkewOperator:
    """(1/n!) sum_w w u w^{-1}."""
    n = u.n
    perms = all_perms(n)
    out = add_all([act_on_operator(w, u) for w in perms])
    return out.scale(Fraction(1, len(perms)))


def times_e(p: SkewOperator) -> SkewOperator:
    """p * e for a group-free p, written out in normal form."""
    n = p.n
    perms = all_perms(n)
    scale = Fraction(1, len(perms))
    out = {}
    for (a, _), f in p.terms.items():
        g = f.scale(scale)
        for w in perms:
            out[(a, w)] = g
    return SkewOperator(n, out, _clean=True)


def e_sandwich_of(p: SkewOperator) -> SkewOperator:
    """e * p * e for a group-free p, using e p e = Sym(p) e."""
    return times_e(symmetrize(p))


__all__ = [
    "SkewOperator",
    "SymbolElement",
    "SymbolFraction",
    "add_all",
    "apply",
    "collapse_right_e",
    "commutator",
    "conjugate_by_delta_power",
    "e_sandwich_of",
    "gamma_degree",
    "principal_symbol",
    "skew_mul",
    "specialize_c",
    "spherical_scalar_symbol",
    "substitute_c",
    "symmetrize",
    "twist_derivatives",
    "times_e",
]

