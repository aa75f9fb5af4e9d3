"""Polynomials over Q(c) in x_1..x_n, y_1..y_n with the diagonal S_n action.

Exponents are stored densely: one tuple of length 2n, x-exponents first.
The symmetric group acts by ``w . x_i = x_{w(i)}`` and ``w . y_i = y_{w(i)}``,
which is the convention (w.f)(v) = f(w^{-1} v) for the permutation
representation.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import permutations
from typing import Iterable, Iterator

from .errors import ArityMismatch
from .scalar import ONE, ZERO, FieldScalar, K


class Perm(tuple):
    """A permutation of {0..n-1} stored as its tuple of images.

    ``Perm.from_images([2, 1])`` takes 1-based images; ``w[i]`` is 0-based.
    Composition ``v * w`` means "apply w first".
    """

    __slots__ = ()

    @classmethod
    def identity(cls, n: int) -> "Perm":
        return cls(range(n))

    @classmethod
    def from_images(cls, images: Iterable[int]) -> "Perm":
        imgs = [i - 1 for i in images]
        if sorted(imgs) != list(range(len(imgs))):
            raise ValueError(f"not a permutation: {list(images)}")
        return cls(imgs)

    @classmethod
    def transposition(cls, n: int, i: int, j: int) -> "Perm":
        """s_{ij} with 1-based i != j."""
        if i == j or not (1 <= i <= n and 1 <= j <= n):
            raise ArityMismatch(f"bad transposition ({i},{j}) for n={n}")
        imgs = list(range(n))
        imgs[i - 1], imgs[j - 1] = j - 1, i - 1
        return cls(imgs)

    @property
    def n(self) -> int:
        return len(self)

    def __mul__(self, other: "Perm") -> "Perm":
        return Perm(self[i] for i in other)

    def inverse(self) -> "Perm":
        inv = [0] * len(self)
        for i, j in enumerate(self):
            inv[j] = i
        return Perm(inv)

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self))

    @property
    def sign(self) -> int:
        return _sign(tuple(self))

    def permute(self, exps: tuple) -> tuple:
        """Exponent vector of w . (monomial with exponents ``exps``), one family."""
        out = [0] * len(self)
        for i, e in enumerate(exps):
            out[self[i]] = e
        return tuple(out)

    def images(self) -> list[int]:
        return [i + 1 for i in self]

    def cycles(self) -> list[tuple[int, ...]]:
        seen, out = set(), []
        for start in range(len(self)):
            if start in seen:
                continue
            cyc, i = [], start
            while i not in seen:
                seen.add(i)
                cyc.append(i)
                i = self[i]
            out.append(tuple(cyc))
        return out

    def transpositions(self) -> list[tuple[int, int]]:
        """1-based transpositions whose product (left to right) is this permutation."""
        out = []
        for cyc in self.cycles():
            # (a0 a1 ... ak) = (a0 ak)(a0 a_{k-1})...(a0 a1)
            for k in range(len(cyc) - 1, 0, -1):
                out.append((cyc[0] + 1, cyc[k] + 1))
        return out

    def __repr__(self):
        return f"Perm({self.images()})"


@lru_cache(maxsize=None)
def _sign(images: tuple) -> int:
    s = 1
    for i in range(len(images)):
        for j in range(i + 1, len(images)):
            if images[i] > images[j]:
                s = -s
    return s


@lru_cache(maxsize=None)
def all_perms(n: int) -> tuple[Perm, ...]:
    return tuple(Perm(p) for p in permutations(range(n)))


def transpositions_of(n: int) -> list[Perm]:
    return [Perm.transposition(n, i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]


# ---------------------------------------------------------------------------


def _grlex_key(e: tuple) -> tuple:
    return (sum(e), e)


class Poly:
    """Sparse polynomial in x_1..x_n, y_1..y_n over Q(c)."""

    __slots__ = ("n", "terms", "_hash")

    def __init__(self, n: int, terms: dict | None = None, *, _clean=False):
        self.n = n
        if terms is None:
            self.terms = {}
        elif _clean:
            self.terms = terms
        else:
            clean = {}
            for e, v in terms.items():
                e = tuple(e)
                if len(e) != 2 * n:
                    raise ArityMismatch(f"exponent {e} has length {len(e)}, expected {2 * n}")
                v = K(v)
                if not v.is_zero():
                    clean[e] = v
            self.terms = clean
        self._hash = None

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, n):
        return cls(n, {}, _clean=True)

    @classmethod
    def constant(cls, n, value):
        value = K(value)
        if value.is_zero():
            return cls.zero(n)
        return cls(n, {(0,) * (2 * n): value}, _clean=True)

    @classmethod
    def one(cls, n):
        return cls.constant(n, ONE)

    @classmethod
    def monomial(cls, n, xexp=None, yexp=None, coeff=ONE):
        xexp = tuple(xexp) if xexp is not None else (0,) * n
        yexp = tuple(yexp) if yexp is not None else (0,) * n
        if len(xexp) != n or len(yexp) != n:
            raise ArityMismatch("monomial exponent length does not match n")
        coeff = K(coeff)
        if coeff.is_zero():
            return cls.zero(n)
        return cls(n, {xexp + yexp: coeff}, _clean=True)

    @classmethod
    def x(cls, n, i):
        if not 1 <= i <= n:
            raise ArityMismatch(f"x{i} out of range for n={n}")
        e = [0] * (2 * n)
        e[i - 1] = 1
        return cls(n, {tuple(e): ONE}, _clean=True)

    @classmethod
    def y(cls, n, i):
        if not 1 <= i <= n:
            raise ArityMismatch(f"y{i} out of range for n={n}")
        e = [0] * (2 * n)
        e[n + i - 1] = 1
        return cls(n, {tuple(e): ONE}, _clean=True)

    # -- basic queries ------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_x_only(self) -> bool:
        n = self.n
        return all(not any(e[n:]) for e in self.terms)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_term(self) -> FieldScalar:
        return self.terms.get((0,) * (2 * self.n), ZERO)

    def bidegree_of(self, e: tuple) -> tuple[int, int]:
        return sum(e[: self.n]), sum(e[self.n:])

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def leading(self):
        """Leading (exponent, coefficient) in graded-lex order."""
        e = max(self.terms, key=_grlex_key)
        return e, self.terms[e]

    def sorted_terms(self) -> list:
        """Canonical serialization order: bidegree-major then lex, descending."""
        n = self.n
        return sorted(
            self.terms.items(),
            key=lambda t: (sum(t[0][:n]), sum(t[0][n:]), t[0][:n], t[0][n:]),
            reverse=True,
        )

    # -- arithmetic ---------------------------------------------------
    def _check(self, other: "Poly"):
        if self.n != other.n:
            raise ArityMismatch(f"n mismatch: {self.n} vs {other.n}")

    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly.constant(self.n, other)
        self._check(other)
        out = dict(self.terms)
        for e, v in other.terms.items():
            w = out.get(e)
            if w is None:
                out[e] = v
            else:
                s = w + v
                if s.is_zero():
                    del out[e]
                else:
                    out[e] = s
        return Poly(self.n, out, _clean=True)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.n, {e: -v for e, v in self.terms.items()}, _clean=True)

    def __sub__(self, other):
        if not isinstance(other, Poly):
            other = Poly.constant(self.n, other)
        return self + (-other)

    def __rsub__(self, other):
        return Poly.constant(self.n, other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(other)
        self._check(other)
        if len(self.terms) < len(other.terms):
            a, b = self.terms, other.terms
        else:
            a, b = other.terms, self.terms
        out: dict = {}
        for e1, v1 in a.items():
            for e2, v2 in b.items():
                e = tuple(i + j for i, j in zip(e1, e2))
                w = out.get(e)
                out[e] = v1 * v2 if w is None else w + v1 * v2
        return Poly(self.n, {e: v for e, v in out.items() if not v.is_zero()}, _clean=True)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, s) -> "Poly":
        s = K(s)
        if s.is_zero():
            return Poly.zero(self.n)
        if s.is_one():
            return self
        return Poly(self.n, {e: v * s for e, v in self.terms.items()}, _clean=True)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        out = Poly.one(self.n)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def mul_monomial(self, e: tuple) -> "Poly":
        return Poly(self.n, {tuple(i + j for i, j in zip(f, e)): v for f, v in self.terms.items()}, _clean=True)

    def partial(self, family: str, i: int) -> "Poly":
        """Formal partial derivative in x_i (family 'x') or y_i (family 'y')."""
        n = self.n
        if not 1 <= i <= n:
            raise ArityMismatch(f"index {i} out of range for n={n}")
        if family not in ("x", "y"):
            raise ValueError(f"unknown variable family {family!r}")
        slot = i - 1 if family == "x" else n + i - 1
        out = {}
        for e, v in self.terms.items():
            k = e[slot]
            if k:
                f = list(e)
                f[slot] = k - 1
                out[tuple(f)] = v * k
        return Poly(n, out, _clean=True)

    def act(self, w: Perm) -> "Poly":
        """w . p for the diagonal action on both variable families."""
        n = self.n
        if len(w) != n:
            raise ArityMismatch(f"permutation of {len(w)} letters acting on n={n}")
        if all(i == j for i, j in enumerate(w)):
            return self
        out = {}
        for e, v in self.terms.items():
            f = [0] * (2 * n)
            for i in range(n):
                f[w[i]] = e[i]
                f[n + w[i]] = e[n + i]
            out[tuple(f)] = v
        return Poly(n, out, _clean=True)

    def bidegree_components(self) -> list[tuple[tuple[int, int], "Poly"]]:
        n = self.n
        groups: dict = {}
        for e, v in self.terms.items():
            groups.setdefault((sum(e[:n]), sum(e[n:])), {})[e] = v
        return [(bd, Poly(n, groups[bd], _clean=True)) for bd in sorted(groups)]

    def map_coefficients(self, fn) -> "Poly":
        out = {}
        for e, v in self.terms.items():
            v = K(fn(v))
            if not v.is_zero():
                out[e] = v
        return Poly(self.n, out, _clean=True)

    def divide_exact(self, d: "Poly") -> "Poly | None":
        """Quotient q with self = q*d, or None when d does not divide self.

        Multivariate division in graded-lex order; stops at the first leading
        term that is not divisible, which for exact division certifies failure.
        """
        self._check(d)
        if d.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        le, lc = d.leading()
        rem = dict(self.terms)
        quot: dict = {}
        dterms = list(d.terms.items())
        while rem:
            e = max(rem, key=_grlex_key)
            diff = tuple(i - j for i, j in zip(e, le))
            if any(k < 0 for k in diff):
                return None
            q = rem[e] / lc
            quot[diff] = q
            for f, v in dterms:
                g = tuple(i + j for i, j in zip(f, diff))
                cur = rem.get(g)
                s = -(q * v) if cur is None else cur - q * v
                if s.is_zero():
                    rem.pop(g, None)
                else:
                    rem[g] = s
        return Poly(self.n, quot, _clean=True)

    # -- comparison / hashing ----------------------------------------
    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.n == other.n and self.terms == other.terms
        if isinstance(other, (int, FieldScalar)):
            return self == Poly.constant(self.n, other)
        return NotImplemented

    def __hash__(self):
        h = self._hash
        if h is None:
            h = self._hash = hash((self.n, frozenset(self.terms.items())))
        return h

    def __repr__(self):
        return f"Poly(n={self.n}, {self})"

    def __str__(self):
        return render_poly(self)


def _monomial_str(n: int, e: tuple) -> str:
    parts = []
    for fam, off in (("x", 0), ("y", n)):
        for i in range(n):
            k = e[off + i]
            if k == 1:
                parts.append(f"{fam}{i + 1}")
            elif k > 1:
                parts.append(f"{fam}{i + 1}^{k}")
    return "*".join(parts)


def render_terms(items: list[tuple[str, FieldScalar]], sole_ok: bool = True) -> str:
    """Join (monomial-text, coefficient) pairs into a signed sum.

    Multi-term coefficients are parenthesized unless they stand alone.
    """
    if not items:
        return "0"
    out = []
    for k, (mono, coef) in enumerate(items):
        text = str(coef)
        multi = coef.term_count() > 1
        if multi and (mono or len(items) > 1 or not sole_ok):
            neg, body = False, f"({text})"
        elif text.startswith("-"):
            neg, body = True, text[1:]
        else:
            neg, body = False, text
        if mono:
            body = mono if body == "1" else f"{body}*{mono}"
        if k == 0:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


def render_poly(p: Poly) -> str:
    return render_terms([(_monomial_str(p.n, e), v) for e, v in p.sorted_terms()])


# ---------------------------------------------------------------------------
# the discriminant and related fixed polynomials, cached per n


@lru_cache(maxsize=None)
def delta(n: int) -> Poly:
    """prod_{i<j} (x_i - x_j)."""
    out = Poly.one(n)
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            out = out * (Poly.x(n, i) - Poly.x(n, j))
    return out


@lru_cache(maxsize=None)
def delta_power(n: int, k: int) -> Poly:
    return delta(n) ** k


def delta_degree(n: int) -> int:
    return n * (n - 1) // 2


@lru_cache(maxsize=None)
def delta_partial(n: int, i: int) -> Poly:
    return delta(n).partial("x", i)


@lru_cache(maxsize=None)
def delta_over_root(n: int, i: int, j: int) -> Poly:
    """delta / (x_i - x_j) as a polynomial (i != j, 1-based)."""
    q = delta(n).divide_exact(Poly.x(n, i) - Poly.x(n, j))
    assert q is not None
    return q


def monomials(n: int, degree: int) -> Iterator[tuple]:
    """Exponent tuples of length n with the given total degree, lex-descending."""
    if n == 1:
        yield (degree,)
        return
    for k in range(degree, -1, -1):
        for rest in monomials(n - 1, degree - k):
            yield (k,) + rest


def bidegree_monomials(n: int, i: int, j: int) -> list[tuple]:
    return [a + b for a in monomials(n, i) for b in monomials(n, j)]


# plain-function helpers --------------------------------------------------------


def poly_arith(p: Poly, q, op: str) -> Poly:
    if op == "add":
        return p + q
    if op == "mul":
        return p * q
    if op == "scale":
        return p.scale(q)
    raise ValueError(f"unknown op {op!r}")


def partial_derivative(p: Poly, family: str, i: int) -> Poly:
    return p.partial(family, i)


def group_act(w: Perm, p: Poly) -> Poly:
    return p.act(w)


def bidegree_components(p: Poly):
    return p.bidegree_components()
