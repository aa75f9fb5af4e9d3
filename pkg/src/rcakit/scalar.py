"""Exact arithmetic in K = Q(c), rational functions in one formal parameter.

A :class:`FieldScalar` is stored as ``num / den`` where ``num`` has rational
coefficients and ``den`` is a primitive integer polynomial with positive
leading coefficient, coprime to ``num``.  Zero is ``0 / 1``.  With that
canonical form, equality is plain equality of the two polynomials.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

from flint import fmpq, fmpq_poly, fmpz_poly

from .errors import DivisionByZero, PoleAtSpecialization

_ONE_Z = fmpz_poly([1])


def _to_fmpq_poly(p) -> fmpq_poly:
    if isinstance(p, fmpq_poly):
        return p
    if isinstance(p, fmpz_poly):
        return fmpq_poly(p)
    if isinstance(p, (list, tuple)):
        return fmpq_poly([fmpq(Fraction(x).numerator, Fraction(x).denominator) for x in p])
    if isinstance(p, Rational):
        q = Fraction(p)
        return fmpq_poly([fmpq(q.numerator, q.denominator)])
    raise TypeError(f"cannot read a polynomial in c from {p!r}")


def _fraction(q: fmpq) -> Fraction:
    return Fraction(int(q.p), int(q.q))


class FieldScalar:
    """Element of Q(c); immutable, hashable, canonical."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num=0, den=None, *, _canonical=False):
        if _canonical:
            self.num = num
            self.den = den
            self._hash = None
            return
        num = _to_fmpq_poly(num)
        if den is None:
            self.num, self.den = num, _ONE_Z
            self._hash = None
            return
        den = _to_fmpq_poly(den)
        if den.is_zero():
            raise DivisionByZero("zero denominator in Q(c)")
        self.num, self.den = _canonical_pair(num, den)
        self._hash = None

    # -- constructors -------------------------------------------------
    @classmethod
    def const(cls, q) -> "FieldScalar":
        if isinstance(q, FieldScalar):
            return q
        q = Fraction(q)
        return cls(fmpq_poly([fmpq(q.numerator, q.denominator)]), _ONE_Z, _canonical=True)

    @classmethod
    def param(cls) -> "FieldScalar":
        """The formal parameter c."""
        return cls(fmpq_poly([0, 1]), _ONE_Z, _canonical=True)

    # -- predicates ---------------------------------------------------
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.den.is_one() and self.num.is_one()

    def is_constant(self) -> bool:
        return self.den.is_one() and self.num.degree() <= 0

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not a constant")
        if self.num.is_zero():
            return Fraction(0)
        return _fraction(self.num[0])

    def is_integer(self) -> bool:
        return self.is_constant() and self.constant_value().denominator == 1

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other):
        other = coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den.is_one() and other.den.is_one():
            return FieldScalar(self.num + other.num, _ONE_Z, _canonical=True)
        if self.den == other.den:
            return FieldScalar(self.num + other.num, self.den)
        return FieldScalar(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return FieldScalar(-self.num, self.den, _canonical=True)

    def __sub__(self, other):
        other = coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return coerce(other) - self

    def __mul__(self, other):
        other = coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den.is_one() and other.den.is_one():
            return FieldScalar(self.num * other.num, _ONE_Z, _canonical=True)
        return FieldScalar(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "FieldScalar":
        if self.is_zero():
            raise DivisionByZero("inverse of zero in Q(c)")
        return FieldScalar(fmpq_poly(self.den), self.num)

    def __truediv__(self, other):
        other = coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            raise DivisionByZero("division by zero in Q(c)")
        if other.is_constant():
            return FieldScalar(self.num / other.num[0], self.den, _canonical=True)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return coerce(other) / self

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        if self.den.is_one():
            return FieldScalar(self.num ** e, _ONE_Z, _canonical=True)
        return FieldScalar(self.num ** e, fmpq_poly(self.den ** e))

    # -- comparison ---------------------------------------------------
    def __eq__(self, other):
        other = coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        h = self._hash
        if h is None:
            h = self._hash = hash(
                (tuple((int(q.p), int(q.q)) for q in self.num.coeffs()), tuple(int(z) for z in self.den.coeffs()))
            )
        return h

    def __bool__(self):
        return not self.num.is_zero()

    # -- parameter handling -------------------------------------------
    def evaluate_at(self, r) -> Fraction:
        """Exact value at c = r; raises :class:`PoleAtSpecialization` at a pole."""
        r = Fraction(r)
        x = fmpq(r.numerator, r.denominator)
        d = self.den(x)
        if d == 0:
            raise PoleAtSpecialization(r)
        return _fraction(self.num(x) / d)

    def substitute(self, g: "FieldScalar") -> "FieldScalar":
        """Compose with c -> g."""
        g = coerce(g)

        def horner(p):
            acc = FieldScalar()
            for q in reversed(p.coeffs()):
                acc = acc * g + FieldScalar.const(_fraction(fmpq(q)))
            return acc

        return horner(self.num) / horner(fmpq_poly(self.den))

    # -- rendering ----------------------------------------------------
    def __repr__(self):
        return f"FieldScalar({self})"

    def __str__(self):
        if self.den.is_one():
            return _poly_str(self.num)
        return f"({_poly_str(self.num)})/({_poly_str(fmpq_poly(self.den))})"

    def term_count(self) -> int:
        """Number of monomials of the numerator (used to decide on parentheses)."""
        return sum(1 for q in self.num.coeffs() if q != 0) if self.den.is_one() else 2


def _canonical_pair(num: fmpq_poly, den: fmpq_poly):
    if num.is_zero():
        return fmpq_poly(), _ONE_Z
    if den.degree() > 0:
        g = num.gcd(den)
        if g.degree() > 0:
            num = divmod(num, g)[0]
            den = divmod(den, g)[0]
    # make den an integer polynomial, primitive, positive leading coefficient
    scale = fmpq(int(den.denom()))
    den_int = fmpz_poly([int(q * scale) for q in den.coeffs()])
    content = den_int.content()
    if den_int.coeffs()[-1] < 0:
        content = -content
    den_int = fmpz_poly([int(z) // int(content) for z in den_int.coeffs()])
    num = num * scale / fmpq(int(content))
    return num, den_int


def _poly_str(p: fmpq_poly) -> str:
    """Ascending powers of c: ``1 - c``, ``3/2*c^2``."""
    parts = []
    for k, q in enumerate(p.coeffs()):
        if q == 0:
            continue
        q = _fraction(q)
        mag = abs(q)
        if k == 0:
            body = str(mag)
        else:
            mono = "c" if k == 1 else f"c^{k}"
            body = mono if mag == 1 else f"{mag}*{mono}"
        parts.append((q < 0, body))
    if not parts:
        return "0"
    out = ("-" if parts[0][0] else "") + parts[0][1]
    for neg, body in parts[1:]:
        out += (" - " if neg else " + ") + body
    return out


def coerce(x):
    if isinstance(x, FieldScalar):
        return x
    if isinstance(x, Rational):
        return FieldScalar.const(x)
    return NotImplemented


def K(x) -> FieldScalar:
    """Coerce an int/Fraction/FieldScalar into K; strings ``p/q`` are accepted."""
    if isinstance(x, str):
        return FieldScalar.const(parse_rational(x))
    out = coerce(x)
    if out is NotImplemented:
        raise TypeError(f"cannot coerce {x!r} into Q(c)")
    return out


def parse_rational(text: str) -> Fraction:
    """Strict ``p`` or ``p/q`` parser; floats are rejected on purpose."""
    t = text.strip()
    if "." in t or "e" in t.lower():
        raise ValueError(f"not an exact rational: {text!r}")
    return Fraction(t)


ZERO = FieldScalar()
ONE = FieldScalar.const(1)
C = FieldScalar.param()


def normalize(num, den) -> FieldScalar:
    """Canonical representative of num/den (integer or rational coefficient lists, ascending)."""
    return FieldScalar(num, den)


def evaluate_at(s: FieldScalar, r) -> Fraction:
    return s.evaluate_at(r)
