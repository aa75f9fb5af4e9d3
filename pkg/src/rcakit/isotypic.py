"""Invariant theory of S_n acting diagonally on C[h x h*].

Isotypic bases by character projection, the powers A^m of the sign-isotypic
module, exact ranks over Q(c) and the Molien series used as an independent
cross-check.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial

from flint import fmpq, fmpq_mat, fmpq_mpoly_ctx, fmpq_poly

from .errors import PoleAtSpecialization, ShapeError
from .poly import Poly, all_perms, bidegree_monomials
from .scalar import FieldScalar, K

CHARACTERS = ("triv", "sign")


def _chi(character: str, w) -> int:
    if character == "triv":
        return 1
    if character == "sign":
        return w.sign
    raise ValueError(f"unknown character {character!r}")


# ---------------------------------------------------------------------------
# exact linear algebra


def _is_rational_rows(rows) -> bool:
    return all(K(v).is_constant() for row in rows for v in row)


def _fmpq(v) -> fmpq:
    q = K(v).constant_value()
    return fmpq(q.numerator, q.denominator)


def _rational_matrix(rows, ncols) -> fmpq_mat:
    return fmpq_mat(len(rows), ncols, [_fmpq(v) for row in rows for v in row])


def _check_shape(rows) -> int:
    rows = list(rows)
    if not rows:
        return 0
    width = len(rows[0])
    for r in rows:
        if len(r) != width:
            raise ShapeError(f"ragged matrix: row lengths {len(rows[0])} and {len(r)}")
    return width


def exact_rank(rows) -> int:
    """Rank over Q(c) of a rectangular matrix of FieldScalar-coercible entries."""
    rows = [list(r) for r in rows]
    width = _check_shape(rows)
    if not rows or width == 0:
        return 0
    rows = [[K(v) for v in r] for r in rows]
    if _is_rational_rows(rows):
        return _rational_matrix(rows, width).rank()
    full = min(len(rows), width)
    # a specialization can only lower the rank, so reaching full rank certifies it
    rng = random.Random(0x5EED)
    for _ in range(4):
        r = Fraction(rng.randint(-10**6, 10**6), rng.randint(1, 10**6))
        try:
            vals = [[v.evaluate_at(r) for v in row] for row in rows]
        except PoleAtSpecialization:
            continue
        if fmpq_mat(len(vals), width, [fmpq(q.numerator, q.denominator) for row in vals for q in row]).rank() == full:
            return full
        break
    return _bareiss_rank(rows, width)


def _bareiss_rank(rows: list[list[FieldScalar]], width: int) -> int:
    """Fraction-free elimination over Q[c] after clearing denominators row by row."""
    mat: list[list[fmpq_poly]] = []
    for row in rows:
        den = fmpq_poly([1])
        for v in row:
            d = fmpq_poly(v.den)
            den = divmod(den * d, den.gcd(d))[0]
        mat.append([v.num * divmod(den, fmpq_poly(v.den))[0] for v in row])
    rank = 0
    prev = fmpq_poly([1])
    nrows = len(mat)
    for col in range(width):
        piv = next((r for r in range(rank, nrows) if not mat[r][col].is_zero()), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        p = mat[rank][col]
        for r in range(rank + 1, nrows):
            a = mat[r][col]
            row_r, row_p = mat[r], mat[rank]
            for k in range(col, width):
                val = p * row_r[k] - a * row_p[k]
                row_r[k] = divmod(val, prev)[0]
        prev = p
        rank += 1
        if rank == nrows:
            break
    return rank


def independent_subset(polys: list[Poly]) -> list[Poly]:
    """A maximal linearly independent sublist, scanning in the given order."""
    polys = [p for p in polys if not p.is_zero()]
    if not polys:
        return []
    if all(v.is_constant() for p in polys for v in p.terms.values()):
        n = polys[0].n
        keep = independent_rows([to_mpoly(p, n) for p in polys])
        return [polys[k] for k in keep]
    out: list[Poly] = []
    for p in polys:
        cand = out + [p]
        if exact_rank(_coefficient_rows(cand)) == len(cand):
            out.append(p)
    return out


# rational polynomials as flint multivariate polynomials in 2n variables


@lru_cache(maxsize=None)
def mpoly_context(n: int):
    return fmpq_mpoly_ctx.get(("z", 2 * n), "deglex")


def to_mpoly(p: Poly, n: int):
    data = {}
    for e, v in p.terms.items():
        q = v.constant_value()
        data[e] = fmpq(q.numerator, q.denominator)
    return mpoly_context(n).from_dict(data)


def from_mpoly(f, n: int) -> Poly:
    return Poly(n, {tuple(int(k) for k in e): K(Fraction(int(v.p), int(v.q))) for e, v in f.to_dict().items()})


def mpoly_matrix(polys) -> fmpq_mat:
    cols: dict = {}
    dicts = [f.to_dict() for f in polys]
    for d in dicts:
        for e in d:
            cols.setdefault(e, len(cols))
    w = len(cols)
    flat = [fmpq(0)] * (len(dicts) * w)
    for r, d in enumerate(dicts):
        for e, v in d.items():
            flat[r * w + cols[e]] = v
    return fmpq_mat(len(dicts), w, flat)


def mpoly_rank(polys) -> int:
    return mpoly_matrix(polys).rank() if polys else 0


def independent_rows(polys, chunk: int = 128) -> list[int]:
    """Indices of a maximal independent sublist of flint polynomials (earliest rows win).

    Rows are fed in chunks so the matrices stay small: basis so far plus one chunk.
    """
    idx = [k for k, f in enumerate(polys) if not f.is_zero()]
    keep: list[int] = []
    for start in range(0, len(idx), chunk):
        cand = keep + idx[start:start + chunk]
        keep = [cand[k] for k in _independent_once([polys[k] for k in cand])]
    return keep


def _independent_once(polys) -> list[int]:
    if not polys:
        return []
    # pivot columns of the transposed echelon form pick independent rows
    red, rank = mpoly_matrix(polys).transpose().rref()
    if rank == len(polys):
        return list(range(rank))
    picks, col = [], 0
    for r in range(rank):
        while red[r, col] == 0:
            col += 1
        picks.append(col)
        col += 1
    return picks


def _coefficient_rows(polys: list[Poly]) -> list[list[FieldScalar]]:
    keys = sorted({e for p in polys for e in p.terms})
    zero = K(0)
    return [[p.terms.get(e, zero) for e in keys] for p in polys]


def span_rank(polys: list[Poly]) -> int:
    return exact_rank(_coefficient_rows(polys)) if polys else 0


# ---------------------------------------------------------------------------
# isotypic bases


@dataclass(frozen=True)
class IsotypicBasis:
    n: int
    character: str
    bidegree: tuple[int, int]
    basis: tuple[Poly, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)


def project(p: Poly, character: str) -> Poly:
    """(1/n!) sum_w chi(w) w.p"""
    perms = all_perms(p.n)
    acc: dict = {}
    for w in perms:
        s = _chi(character, w)
        for e, v in p.act(w).terms.items():
            cur = acc.get(e)
            term = v if s == 1 else -v
            acc[e] = term if cur is None else cur + term
    scale = Fraction(1, len(perms))
    return Poly(p.n, {e: v * scale for e, v in acc.items() if not v.is_zero()}, _clean=True)


def isotypic_basis(n: int, character: str, bidegree: tuple[int, int]) -> IsotypicBasis:
    return _isotypic_basis(n, character, tuple(bidegree))


@lru_cache(maxsize=None)
def _isotypic_basis(n, character, bidegree):
    i, j = bidegree
    if character not in CHARACTERS:
        raise ValueError(f"unknown character {character!r}")
    if i < 0 or j < 0:
        return IsotypicBasis(n, character, bidegree, ())
    projections = []
    for e in bidegree_monomials(n, i, j):
        q = project(Poly(n, {e: K(1)}, _clean=True), character)
        if not q.is_zero():
            projections.append(q)
    return IsotypicBasis(n, character, bidegree, tuple(independent_subset(projections)))


def a_power_basis(n: int, m: int, bidegree: tuple[int, int]) -> IsotypicBasis:
    """Basis of A^m at the given bidegree; A^0 is the invariant ring."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    return _a_power_basis(n, m, tuple(bidegree))


@lru_cache(maxsize=None)
def _a_power_basis(n, m, bidegree):
    i, j = bidegree
    if m == 0:
        return isotypic_basis(n, "triv", bidegree)
    if m == 1:
        return isotypic_basis(n, "sign", bidegree)
    if i < 0 or j < 0:
        return IsotypicBasis(n, "sign" if m % 2 else "triv", bidegree, ())
    products = []
    for i1 in range(i + 1):
        for j1 in range(j + 1):
            left = _a_power_mpolys(n, m - 1, (i1, j1))
            if not left:
                continue
            right = _a_power_mpolys(n, 1, (i - i1, j - j1))
            products.extend(p * q for p in left for q in right)
    keep = independent_rows(products)
    char = "sign" if m % 2 else "triv"
    return IsotypicBasis(n, char, bidegree, tuple(from_mpoly(products[k], n) for k in keep))


@lru_cache(maxsize=None)
def _a_power_mpolys(n, m, bidegree):
    return [to_mpoly(p, n) for p in _a_power_basis(n, m, bidegree).basis]


# ---------------------------------------------------------------------------
# Molien series


def _partition_count(parts: tuple[int, ...], degree: int) -> int:
    """Coefficient of q^degree in prod_k 1/(1 - q^{parts_k})."""
    ways = [1] + [0] * degree
    for p in parts:
        for d in range(p, degree + 1):
            ways[d] += ways[d - p]
    return ways[degree]


def molien_dimension(n: int, character: str, bidegree: tuple[int, int]) -> int:
    i, j = bidegree
    if i < 0 or j < 0:
        return 0
    total = Fraction(0)
    for w in all_perms(n):
        lens = tuple(len(c) for c in w.cycles())
        total += _chi(character, w) * _partition_count(lens, i) * _partition_count(lens, j)
    total /= factorial(n)
    if total.denominator != 1:
        raise ArithmeticError(f"Molien average is not an integer: {total}")
    return int(total)


# ---------------------------------------------------------------------------
# dimension tables


@dataclass
class DimensionTable:
    """Dimensions keyed by bidegree (i, j), with a free-form provenance record."""

    entries: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    def __getitem__(self, bd):
        return self.entries.get(tuple(bd), 0)

    def __setitem__(self, bd, value):
        self.entries[tuple(bd)] = value

    def __iter__(self):
        return iter(sorted(self.entries.items()))

    def __len__(self):
        return len(self.entries)

    def __eq__(self, other):
        if not isinstance(other, DimensionTable):
            return NotImplemented
        return {k: v for k, v in self.entries.items() if v} == {k: v for k, v in other.entries.items() if v}

    def to_rows(self):
        return [{"i": i, "j": j, "dim": d} for (i, j), d in sorted(self.entries.items())]


def hilbert_table(n: int, character: str, m: int | None, maxdeg: tuple[int, int]) -> DimensionTable:
    """Dimensions of B^m on 0 <= i <= DX, 0 <= j <= DY, where B is the ``character`` component.

    For ``sign`` this is A^m.  The invariant ring is closed under products and
    contains 1, so for ``triv`` every power is the invariant ring itself.  With
    ``m=None`` the plain isotypic component is tabulated.
    """
    if character not in ("triv", "sign"):
        raise ValueError(f"unknown character {character!r}")
    if m is not None and m < 0:
        raise ValueError("m must be nonnegative")
    dx, dy = maxdeg
    table = DimensionTable(meta={"n": n, "character": character, "m": m})
    for i in range(dx + 1):
        for j in range(dy + 1):
            if m is None or character == "triv":
                table[(i, j)] = isotypic_basis(n, character, (i, j)).dim
            else:
                table[(i, j)] = a_power_basis(n, m, (i, j)).dim
    return table


__all__ = [
    "DimensionTable",
    "IsotypicBasis",
    "a_power_basis",
    "exact_rank",
    "hilbert_table",
    "independent_subset",
    "isotypic_basis",
    "molien_dimension",
    "project",
]
