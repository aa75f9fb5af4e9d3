"""Spanning sets of the shift bimodules Q and P and their associated graded pieces.

Q_{a-1,a} is spanned by ``e delta^-1 x^a sigma D(y)^b e`` and P_{a,a-1} by
``e x^a sigma D(y)^b delta e`` with Dunkl parameter ``a``; longer shifts are
products along the parameter chain.  Symbols of these operators are
W-invariant functions on h^reg x h^* divided by powers of delta; the tables
here record the dimension of their span per bidegree.

Every generator is homogeneous for the Euler grading (x has degree 1, d and D
have degree -1), so each spherical symbol is bihomogeneous.  Spans of products
are therefore spans of products of per-bidegree bases, which is how chains of
factors are handled without expanding every product.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from itertools import product as iproduct

from flint import fmpq

from .cherednik import CherednikContext, dunkl, idempotent
from .errors import NotSpherical
from .isotypic import DimensionTable, a_power_basis, exact_rank, independent_rows, mpoly_context, mpoly_rank
from .locfrac import LocFrac
from .poly import Poly, all_perms, delta_degree, delta_power, monomials
from .scalar import C, K
from .skew import SkewOperator, SymbolFraction, skew_mul, spherical_scalar_symbol

SIDES = ("Q", "P")


def factor_bounds(n: int, bounds: tuple[int, int], slack: int) -> tuple[int, int]:
    """Per-factor generator bounds (max |a|, max |b|)."""
    dx, dy = bounds
    return dx + delta_degree(n) + slack, dy + slack


def chain_parameters(side: str, m: int, kappa=C) -> tuple:
    """Dunkl parameters of the factors, left to right."""
    kappa = K(kappa)
    if side == "Q":
        return tuple(kappa - (m - 1) + k for k in range(m))
    if side == "P":
        return tuple(kappa - k for k in range(m))
    raise ValueError(f"side must be Q or P, got {side!r}")


# ---------------------------------------------------------------------------
# generators


class _DunklPowers:
    def __init__(self, n, kappa):
        self.n = n
        self.ctx = CherednikContext(n, kappa)
        self.e = idempotent(n)
        self._cache: dict = {}

    def times_e(self, b: tuple) -> SkewOperator:
        """D(y)^b e, built by left multiplication so each step reuses the last."""
        got = self._cache.get(b)
        if got is not None:
            return got
        if not any(b):
            got = self.e
        else:
            i = next(k for k, v in enumerate(b) if v)
            rest = list(b)
            rest[i] -= 1
            got = skew_mul(dunkl(self.ctx, i + 1), self.times_e(tuple(rest)))
        self._cache[b] = got
        return got


def _exponents(n: int, max_total: int):
    for d in range(max_total + 1):
        yield from monomials(n, d)


def _left_function(f: LocFrac, u: SkewOperator) -> SkewOperator:
    return skew_mul(SkewOperator.from_locfrac(f), u)


@dataclass
class Generator:
    operator: SkewOperator
    label: tuple  # (a, b, sigma images)

    @property
    def degree_class(self) -> tuple[int, int]:
        a, b, _ = self.label
        return sum(a), sum(b)


def _factor_generators(n, side, kappa, amax, bmax) -> list[Generator]:
    powers = _DunklPowers(n, kappa)
    e = powers.e
    dinv = LocFrac.delta_pow(n, -1)
    dpos = SkewOperator.delta_pow(n, 1)
    seen: set = set()
    out = []
    for b in _exponents(n, bmax):
        for sigma in all_perms(n):
            g = SkewOperator.group(sigma)
            if side == "Q":
                tail = skew_mul(g, powers.times_e(b))
            else:
                tail = skew_mul(g, skew_mul(_d_power(powers, b), skew_mul(dpos, e)))
            for a in _exponents(n, amax):
                xa = LocFrac(Poly.monomial(n, a), 0, _normal=True)
                if side == "Q":
                    body = _left_function(dinv * xa, tail)
                else:
                    body = _left_function(xa, tail)
                op = skew_mul(e, body)
                if op.is_zero() or op in seen:
                    continue
                seen.add(op)
                out.append(Generator(op, (a, b, tuple(sigma.images()))))
    return out


def _d_power(powers: _DunklPowers, b: tuple) -> SkewOperator:
    out = SkewOperator.one(powers.n)
    for i, k in enumerate(b):
        for _ in range(k):
            out = skew_mul(out, dunkl(powers.ctx, i + 1))
    return out


@dataclass
class FactorChain:
    """All products g_1 * ... * g_m with g_k drawn from ``factors[k]``.

    Iteration expands products lazily; ``len`` counts them.  ``total_bounds``
    optionally restricts the summed generator degrees (sum |a|, sum |b|).
    """

    n: int
    side: str
    m: int
    kappas: tuple
    factors: list[list[Generator]]
    total_bounds: tuple[int, int] | None = None

    def _admissible(self, combo) -> bool:
        if self.total_bounds is None:
            return True
        sa = sum(g.degree_class[0] for g in combo)
        sb = sum(g.degree_class[1] for g in combo)
        return sa <= self.total_bounds[0] and sb <= self.total_bounds[1]

    def __iter__(self):
        for combo in iproduct(*self.factors):
            if self._admissible(combo):
                yield reduce(skew_mul, (g.operator for g in combo))

    def __len__(self):
        if self.total_bounds is None:
            out = 1
            for f in self.factors:
                out *= len(f)
            return out
        return sum(1 for combo in iproduct(*self.factors) if self._admissible(combo))


def _spanning_set(n, m, bounds, slack, side, kappa, total_bounds=None, per_factor=None) -> FactorChain:
    if m < 1:
        raise ValueError("m must be at least 1; use the PBW check for m = 0")
    amax, bmax = per_factor if per_factor is not None else factor_bounds(n, bounds, slack)
    kappas = chain_parameters(side, m, kappa)
    factors = [_factor_generators(n, side, k, amax, bmax) for k in kappas]
    return FactorChain(n, side, m, kappas, factors, total_bounds)


def q_spanning_set(n: int, m: int, bounds=(4, 4), slack: int = 2, kappa=C) -> FactorChain:
    """Generators of Q_{kappa-m, kappa} as a chain of e delta^-1 x^a sigma D^b e factors."""
    return _spanning_set(n, m, bounds, slack, "Q", kappa)


def p_spanning_set(n: int, m: int, bounds=(4, 4), slack: int = 2, kappa=C) -> FactorChain:
    """Generators of P_{kappa, kappa-m} as a chain of e x^a sigma D^b delta e factors."""
    return _spanning_set(n, m, bounds, slack, "P", kappa)


def merged_spanning_set(n: int, m: int, bounds, slack: int, side: str, kappa=C) -> FactorChain:
    """Products whose generator degrees are bounded in total rather than per factor."""
    dx, dy = bounds
    N = delta_degree(n)
    total = (dx + m * N + slack, dy + slack)
    return _spanning_set(n, m, bounds, slack, side, kappa, total_bounds=total, per_factor=total)


# ---------------------------------------------------------------------------
# symbol spans


class _SymbolSpace:
    """Rational symbols as numerators over a fixed delta power, stored as flint polynomials."""

    def __init__(self, n: int, dpow: int):
        self.n = n
        self.dpow = dpow
        self.ctx = mpoly_context(n)

    def to_mpoly(self, p: Poly):
        data = {}
        for e, v in p.terms.items():
            q = v.constant_value()
            data[e] = fmpq(q.numerator, q.denominator)
        return self.ctx.from_dict(data) if data else self.ctx.from_dict({})

    def from_mpoly(self, f) -> Poly:
        return Poly(self.n, {tuple(int(k) for k in e): K(_frac(v)) for e, v in f.to_dict().items()})

    def bidegree(self, f) -> tuple[int, int]:
        n = self.n
        e = next(iter(f.to_dict()))
        return sum(e[:n]) - self.dpow * delta_degree(n), sum(e[n:])


def _frac(q):
    return Fraction(int(q.p), int(q.q))


def _rank_of(polys, space: _SymbolSpace) -> int:
    return mpoly_rank(polys)


def _reduce_basis(polys, space: _SymbolSpace) -> list:
    """Independent sublist spanning the same space (earliest rows win)."""
    return [polys[k] for k in independent_rows(polys)]


@dataclass
class SymbolSpan:
    """Per-bidegree bases of a span of spherical symbols (numerators over delta^dpow)."""

    n: int
    dpow: int
    bases: dict = field(default_factory=dict)
    space: _SymbolSpace | None = None
    rational: bool = True
    exact: dict = field(default_factory=dict)  # bidegree -> list of SymbolFraction (non-rational case)


def _symbol_of(u: SkewOperator, where) -> SymbolFraction:
    try:
        return spherical_scalar_symbol(u)
    except NotSpherical as exc:
        raise NotSpherical(f"generator {where}: {exc}") from exc


def _factor_span(gens: list[Generator], dpow: int, n: int, by_class: bool) -> dict:
    """{key: {bidegree: [mpoly]}} with key the degree class (or None)."""
    space = _SymbolSpace(n, dpow)
    groups: dict = {}
    for g in gens:
        s = _symbol_of(g.operator, g.label)
        num = s.rescaled(dpow) if s.k <= dpow else None
        if num is None:
            raise NotSpherical(f"generator {g.label}: symbol has delta^{s.k} beyond the expected delta^{dpow}")
        for (i, j), part in Poly.bidegree_components(num):
            key = g.degree_class if by_class else None
            groups.setdefault(key, {}).setdefault((i - dpow * delta_degree(n), j), []).append(space.to_mpoly(part))
    return {k: {bd: _reduce_basis(v, space) for bd, v in d.items()} for k, d in groups.items()}


def _combine(left: dict, right: dict, space: _SymbolSpace, total_bounds, by_class: bool, progress) -> dict:
    out: dict = {}
    for (kl, dl), (kr, dr) in iproduct(left.items(), right.items()):
        key = None
        if by_class:
            key = (kl[0] + kr[0], kl[1] + kr[1])
            if total_bounds is not None and (key[0] > total_bounds[0] or key[1] > total_bounds[1]):
                continue
        bucket = out.setdefault(key, {})
        for (bl, pl), (br, pr) in iproduct(dl.items(), dr.items()):
            bd = (bl[0] + br[0], bl[1] + br[1])
            bucket.setdefault(bd, []).extend(f * g for f in pl for g in pr)
    for key, d in out.items():
        for bd in list(d):
            d[bd] = _reduce_basis(d[bd], space)
            if progress:
                progress(f"  combined bidegree {bd}: {len(d[bd])}")
    return out


def chain_symbol_span(chain: FactorChain, progress=None) -> SymbolSpan:
    n = chain.n
    per_factor_dpow = 1 if chain.side == "Q" else 0
    by_class = chain.total_bounds is not None
    spans = []
    for k, gens in enumerate(chain.factors):
        if progress:
            progress(f"factor {k + 1}/{len(chain.factors)}: {len(gens)} generators, kappa = {chain.kappas[k]}")
        spans.append(_factor_span(gens, per_factor_dpow, n, by_class))
    acc = spans[0]
    dpow = per_factor_dpow
    for nxt in spans[1:]:
        dpow += per_factor_dpow
        acc = _combine(acc, nxt, _SymbolSpace(n, dpow), chain.total_bounds, by_class, progress)
    space = _SymbolSpace(n, dpow)
    merged: dict = {}
    for d in acc.values():
        for bd, polys in d.items():
            merged.setdefault(bd, []).extend(polys)
    bases = {bd: _reduce_basis(v, space) for bd, v in merged.items()}
    return SymbolSpan(n, dpow, {bd: v for bd, v in bases.items() if v}, space)


def operators_symbol_span(ops, n: int) -> SymbolSpan:
    """Span of spherical symbols of an explicit list of operators."""
    symbols = []
    for idx, u in enumerate(ops):
        if u.n != n:
            raise ValueError("operator rank does not match n")
        symbols.append(_symbol_of(u, f"#{idx}"))
    if not symbols:
        return SymbolSpan(n, 0, {}, _SymbolSpace(n, 0))
    dpow = max(s.k for s in symbols)
    rational = all(v.is_constant() for s in symbols for v in s.num.terms.values())
    if rational:
        space = _SymbolSpace(n, dpow)
        groups: dict = {}
        for s in symbols:
            for (i, j), part in s.rescaled(dpow).bidegree_components():
                groups.setdefault((i - dpow * delta_degree(n), j), []).append(space.to_mpoly(part))
        return SymbolSpan(n, dpow, {bd: _reduce_basis(v, space) for bd, v in groups.items()}, space)
    exact: dict = {}
    for s in symbols:
        for bd, part in s.bidegree_components():
            exact.setdefault(bd, []).append(part.rescaled(dpow))
    span = SymbolSpan(n, dpow, {}, None, rational=False)
    for bd, polys in exact.items():
        keys = sorted({e for p in polys for e in p.terms})
        rows = [[p.terms.get(e, K(0)) for e in keys] for p in polys]
        span.exact[bd] = polys
        span.bases[bd] = [None] * exact_rank(rows)
    return span


def gr_dimension_table(spanning, n: int, progress=None) -> DimensionTable:
    """Bidegree dimensions of the span of spherical symbols.

    ``spanning`` is a :class:`FactorChain` or any iterable of e-sandwiched operators.
    """
    if isinstance(spanning, FactorChain):
        span = chain_symbol_span(spanning, progress)
        meta = {"space": f"gr {spanning.side}", "m": spanning.m, "kappas": [str(k) for k in spanning.kappas]}
    else:
        span = operators_symbol_span(list(spanning), n)
        meta = {"space": "gr span"}
    table = DimensionTable(meta={"n": n, **meta})
    for bd in sorted(span.bases):
        table[bd] = len(span.bases[bd])
    table.span = span
    return table


# ---------------------------------------------------------------------------
# comparison with the A^m targets


def target_bidegree(n: int, m: int, side: str, bd: tuple[int, int]) -> tuple[int, int]:
    i, j = bd
    N = delta_degree(n)
    return (i + m * N, j) if side == "Q" else (i - m * N, j)


def target_dim(n: int, m: int, side: str, bd) -> int:
    ti, tj = target_bidegree(n, m, side, bd)
    if ti < 0 or tj < 0:
        return 0
    return a_power_basis(n, m, (ti, tj)).dim


@dataclass
class GrRecord:
    bidegree: tuple[int, int]
    span_dim: int
    target_dim: int
    status: str
    member: bool
    trusted: bool

    def as_dict(self):
        return {
            "i": self.bidegree[0],
            "j": self.bidegree[1],
            "span": self.span_dim,
            "target": self.target_dim,
            "status": self.status,
            "member": self.member,
            "trusted": self.trusted,
        }


@dataclass
class GrComparison:
    n: int
    m: int
    side: str
    bounds: tuple[int, int]
    slack: int
    records: list[GrRecord]

    @property
    def overflow(self) -> list[GrRecord]:
        return [r for r in self.records if r.status == "overflow"]

    @property
    def nonmembers(self) -> list[GrRecord]:
        return [r for r in self.records if not r.member]

    @property
    def trusted_mismatches(self) -> list[GrRecord]:
        return [r for r in self.records if r.trusted and r.status != "match"]

    @property
    def untrusted_deficits(self) -> list[GrRecord]:
        return [r for r in self.records if not r.trusted and r.status == "deficit"]

    @property
    def ok(self) -> bool:
        return not self.overflow and not self.nonmembers and not self.trusted_mismatches

    def as_dict(self):
        return {
            "n": self.n,
            "m": self.m,
            "side": self.side,
            "bounds": list(self.bounds),
            "slack": self.slack,
            "trusted_region": "i <= DX and j <= DY",
            "records": [r.as_dict() for r in self.records],
        }


def _status(span_dim, tdim):
    if span_dim == tdim:
        return "match"
    return "overflow" if span_dim > tdim else "deficit"


def _common_power(span: SymbolSpan, m: int, side: str) -> int:
    return max(span.dpow, m) if side == "Q" else span.dpow


def _target_polys(n, m, side, bd, dpow: int) -> list[Poly]:
    """Target basis at bd as numerators over delta^dpow."""
    ti, tj = target_bidegree(n, m, side, bd)
    if ti < 0 or tj < 0:
        return []
    shift = dpow - m if side == "Q" else dpow + m
    basis = a_power_basis(n, m, (ti, tj)).basis
    if shift == 0:
        return list(basis)
    factor = delta_power(n, shift)
    return [p * factor for p in basis]


def compare_with_target(table: DimensionTable, n: int, m: int, side: str, bounds=None, slack: int = 0) -> GrComparison:
    """Per-bidegree comparison with delta^-m A^m (side Q) or A^m delta^m (side P)."""
    if side not in SIDES:
        raise ValueError(f"side must be Q or P, got {side!r}")
    span: SymbolSpan | None = getattr(table, "span", None)
    N = delta_degree(n)
    bds = set(table.entries)
    if bounds is not None:
        dx, dy = bounds
        lo = -m * N if side == "Q" else m * N
        bds |= {(i, j) for i in range(lo, dx + 1) for j in range(dy + 1)}
    records = []
    for bd in sorted(bds):
        sdim = table[bd]
        tdim = target_dim(n, m, side, bd)
        member = True
        if span is not None and sdim:
            dpow = _common_power(span, m, side)
            if span.rational and span.space is not None:
                space = _SymbolSpace(n, dpow)
                lift = space.to_mpoly(delta_power(n, dpow - span.dpow))
                target = [space.to_mpoly(p) for p in _target_polys(n, m, side, bd, dpow)]
                base = _rank_of(target, space)
                member = _rank_of(target + [f * lift for f in span.bases[bd]], space) == base
            else:
                member = _exact_membership(span, bd, n, m, side)
        trusted = bounds is not None and bd[0] <= bounds[0] and bd[1] <= bounds[1]
        records.append(GrRecord(bd, sdim, tdim, _status(sdim, tdim), member, trusted))
    return GrComparison(n, m, side, tuple(bounds) if bounds else (0, 0), slack, records)


def _exact_membership(span: SymbolSpan, bd, n, m, side) -> bool:
    dpow = _common_power(span, m, side)
    lift = delta_power(n, dpow - span.dpow)
    polys = [p * lift for p in span.exact.get(bd, [])]
    target = _target_polys(n, m, side, bd, dpow)
    keys = sorted({e for p in target + polys for e in p.terms})

    def rows(ps):
        return [[p.terms.get(e, K(0)) for e in keys] for p in ps]

    return exact_rank(rows(target + polys)) == exact_rank(rows(target))


def gr_comparison(n: int, m: int, side: str, bounds=(4, 4), slack: int = 2, kappa=C, progress=None) -> GrComparison:
    """Build the spanning set, its gr table, and the comparison in one go."""
    chain = q_spanning_set(n, m, bounds, slack, kappa) if side == "Q" else p_spanning_set(n, m, bounds, slack, kappa)
    table = gr_dimension_table(chain, n, progress)
    return compare_with_target(table, n, m, side, bounds, slack)


def stderr_progress(msg: str) -> None:
    print(msg, file=sys.stderr, flush=True)


__all__ = [
    "FactorChain",
    "GrComparison",
    "GrRecord",
    "chain_parameters",
    "compare_with_target",
    "gr_comparison",
    "gr_dimension_table",
    "merged_spanning_set",
    "p_spanning_set",
    "q_spanning_set",
    "target_dim",
]
