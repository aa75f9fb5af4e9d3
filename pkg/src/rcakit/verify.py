"""Named verification suites and their structured reports."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .bimod import gr_comparison
from .cherednik import (
    CherednikContext,
    calogero_moser,
    dunkl,
    idempotent,
    is_good,
    laplacian,
    nabla2,
    phi_twist,
    radial_rhs,
    theta_spher,
)
from .errors import UnknownSuite
from .expr import render
from .isotypic import exact_rank, molien_dimension, span_rank
from .locfrac import LocFrac
from .poly import Perm, Poly, all_perms, monomials
from .scalar import C, K
from .skew import (
    SkewOperator,
    add_all,
    collapse_right_e,
    commutator,
    conjugate_by_delta_power,
    e_sandwich_of,
    principal_symbol,
    skew_mul,
    spherical_scalar_symbol,
    substitute_c,
)

MAX_DIFF_TERMS = 20


@dataclass
class Check:
    name: str
    status: str  # pass | fail | skip
    detail: str = ""
    ms: int = 0

    def as_dict(self, timing=True):
        out = {"name": self.name, "status": self.status, "detail": self.detail}
        out["ms"] = self.ms if timing else 0
        return out


@dataclass
class CheckReport:
    suite: str
    n: int
    param: Fraction | None = None
    checks: list[Check] = field(default_factory=list)

    @property
    def mode(self) -> str:
        return "formal" if self.param is None else "rational"

    @property
    def passed(self) -> bool:
        return all(c.status != "fail" for c in self.checks)

    def as_dict(self, timing=True) -> dict:
        param = {"mode": self.mode}
        if self.param is not None:
            param["value"] = str(self.param)
        return {
            "suite": self.suite,
            "n": self.n,
            "param": param,
            "checks": [c.as_dict(timing) for c in self.checks],
        }

    def to_json(self, timing=True) -> str:
        return json.dumps(self.as_dict(timing), indent=2)

    def summary(self) -> str:
        counts = {s: sum(1 for c in self.checks if c.status == s) for s in ("pass", "fail", "skip")}
        verdict = "PASS" if self.passed else "FAIL"
        return f"{self.suite} n={self.n} {self.mode}: {verdict} ({counts['pass']} pass, {counts['fail']} fail, {counts['skip']} skip)"


@dataclass
class SuiteOptions:
    """Knobs shared by the suites; unused fields are ignored by suites that do not need them."""

    param: Fraction | None = None
    m: int = 1
    bounds: tuple[int, int] = (4, 4)
    slack: int = 2
    pbw_bounds: tuple[int, int] = (3, 3)
    spherical_total: int = 6
    twist_degree: int = 3
    progress: object = None


class _Recorder:
    def __init__(self, report: CheckReport):
        self.report = report

    def run(self, name, fn):
        t0 = time.perf_counter()
        status, detail = fn()
        ms = int((time.perf_counter() - t0) * 1000)
        self.report.checks.append(Check(name, status, detail, ms))

    def identity(self, name, lhs_fn, rhs_fn=None):
        """Pass when lhs - rhs normalizes to zero (rhs defaults to zero)."""

        def body():
            lhs = lhs_fn()
            diff = lhs if rhs_fn is None else lhs - rhs_fn()
            if diff.is_zero():
                return "pass", "difference is the zero operator"
            return "fail", "nonzero difference: " + _truncated(diff)

        self.run(name, body)


def _truncated(u: SkewOperator) -> str:
    if len(u.terms) <= MAX_DIFF_TERMS:
        return render(u)
    keep = dict(u.sorted_terms()[:MAX_DIFF_TERMS])
    return render(SkewOperator(u.n, keep, _clean=True)) + f" + ... ({len(u.terms) - MAX_DIFF_TERMS} more terms)"


def _kappa(opts: SuiteOptions):
    return C if opts.param is None else K(opts.param)


# ---------------------------------------------------------------------------
# suites


def _dunkl_commute(rec: _Recorder, n: int, opts: SuiteOptions):
    ctx = CherednikContext(n, _kappa(opts))
    for i, j in combinations(range(1, n + 1), 2):
        rec.identity(f"[D(y{i}), D(y{j})] = 0", lambda i=i, j=j: commutator(dunkl(ctx, i), dunkl(ctx, j)))


def _operator_rank(ops: list[SkewOperator]) -> tuple[int, str]:
    """Rank of a family of operators, certified through principal symbols when possible.

    If the symbols of each order are independent, so are the operators (a relation
    would give one among the top-order symbols).  Otherwise fall back to eliminating
    the full coefficient vectors over a common delta-power.
    """
    by_order: dict = {}
    for u in ops:
        by_order.setdefault(u.gamma_degree(), []).append(principal_symbol(u))
    full = True
    for syms in by_order.values():
        rows, cols = _symbol_rows(syms)
        if exact_rank(rows) != len(syms):
            full = False
            break
    if full:
        return len(ops), "certified by independent principal symbols in each order"
    top = max(f.k for u in ops for f in u.terms.values())
    vecs = []
    for u in ops:
        vec = {}
        for (a, w), f in u.terms.items():
            num = f.num if f.k == top else f.num * LocFrac.delta_pow(u.n, top - f.k).num
            for e, v in num.terms.items():
                vec[(a, w, e)] = v
        vecs.append(vec)
    keys = sorted({k for v in vecs for k in v})
    zero = K(0)
    return exact_rank([[v.get(k, zero) for k in keys] for v in vecs]), "full elimination over a common delta-power"


def _symbol_rows(syms):
    vecs = []
    for s in syms:
        vec = {}
        top = max(f.k for f in s.terms.values())
        for (b, w), f in s.terms.items():
            num = f.num if f.k == top else f.num * LocFrac.delta_pow(s.n, top - f.k).num
            for e, v in num.terms.items():
                vec[(b, w, top, e)] = v
        vecs.append(vec)
    keys = sorted({k for v in vecs for k in v})
    zero = K(0)
    return [[v.get(k, zero) for k in keys] for v in vecs], keys


def _pbw_slices(rec: _Recorder, n: int, opts: SuiteOptions):
    ctx = CherednikContext(n, _kappa(opts))
    A, B = opts.pbw_bounds
    dpowers: dict = {}

    def dpow(b):
        if b not in dpowers:
            out = SkewOperator.one(n)
            for i, k in enumerate(b):
                for _ in range(k):
                    out = skew_mul(out, dunkl(ctx, i + 1))
            dpowers[b] = out
        return dpowers[b]

    def independence():
        ops = []
        for a in (x for d in range(A + 1) for x in monomials(n, d)):
            xa = SkewOperator.from_locfrac(LocFrac(Poly.monomial(n, a), 0, _normal=True))
            for b in (y for d in range(B + 1) for y in monomials(n, d)):
                left = skew_mul(xa, dpow(b))
                for w in all_perms(n):
                    ops.append(skew_mul(left, SkewOperator.group(w)))
        rank, how = _operator_rank(ops)
        status = "pass" if rank == len(ops) else "fail"
        return status, f"rank {rank} of {len(ops)} operators x^a D^b w with |a| <= {A}, |b| <= {B}; {how}"

    rec.run(f"PBW independence |a|<={A}, |b|<={B}", independence)

    def spherical():
        total = opts.spherical_total
        spans: dict = {}
        # group-free P_b with D^b e = P_b e, built one Dunkl factor at a time
        free = {(0,) * n: SkewOperator.one(n)}
        for b in (y for d in range(1, total + 1) for y in monomials(n, d)):
            i = next(k for k, v in enumerate(b) if v)
            rest = b[:i] + (b[i] - 1,) + b[i + 1 :]
            free[b] = collapse_right_e(skew_mul(dunkl(ctx, i + 1), free[rest]))
        for i in range(total + 1):
            for j in range(total + 1 - i):
                for a in monomials(n, i):
                    xa = SkewOperator.from_locfrac(LocFrac(Poly.monomial(n, a), 0, _normal=True))
                    for b in monomials(n, j):
                        u = e_sandwich_of(skew_mul(xa, free[b]))
                        s = spherical_scalar_symbol(u)
                        for bd, part in s.bidegree_components():
                            spans.setdefault(bd, []).append(part.num)
        bad = []
        for i in range(total + 1):
            for j in range(total + 1 - i):
                got = span_rank(spans.get((i, j), []))
                want = molien_dimension(n, "triv", (i, j))
                if got != want:
                    bad.append(f"({i},{j}): {got} != {want}")
        stray = [bd for bd in spans if bd[0] + bd[1] > total and span_rank(spans[bd])]
        if bad:
            return "fail", "spherical symbol dimensions differ from Molien: " + "; ".join(bad)
        return "pass", f"symbol dims of e x^a D^b e match Molien (triv) for i+j <= {total}" + (
            f"; {len(stray)} higher bidegrees not compared" if stray else ""
        )

    rec.run(f"spherical PBW dims i+j<={opts.spherical_total}", spherical)


def _heckman(rec: _Recorder, n: int, opts: SuiteOptions):
    kappa = _kappa(opts)

    def lhs():
        dm, dp = SkewOperator.delta_pow(n, -1), SkewOperator.delta_pow(n, 1)
        return skew_mul(skew_mul(dm, nabla2(CherednikContext(n, kappa + 1))), skew_mul(idempotent(n, "sign"), dp))

    rec.identity(
        "delta^-1 nabla2_{c+1} e_ delta = nabla2_c e",
        lhs,
        lambda: skew_mul(nabla2(CherednikContext(n, kappa)), idempotent(n)),
    )


def _spherical_laplacian(rec: _Recorder, n: int, opts: SuiteOptions):
    w = _kappa(opts)
    e = idempotent(n)
    lap = nabla2(CherednikContext(n, w))
    P = collapse_right_e(lap)
    rec.identity("sum_t D_w(y_t)^2 e = P e with P group-free", lambda: skew_mul(lap, e), lambda: skew_mul(P, e))
    rec.identity(
        "Theta_w(sum_t D_w(y_t)^2 e) e = L_w e",
        lambda: skew_mul(theta_spher(P, w), e),
        lambda: skew_mul(calogero_moser(n, w), e),
    )


def _radial_part(rec: _Recorder, n: int, opts: SuiteOptions):
    w = _kappa(opts)
    L = calogero_moser(n, w)
    rec.identity(
        "delta^(w+1) radial_rhs delta^-(w+1) = L_w",
        lambda: conjugate_by_delta_power(radial_rhs(n, w), -(w + 1)),
        lambda: L,
    )
    if opts.param is None:
        rec.identity("L_w = L_{-(w+1)}", lambda: substitute_c(L, -C - 1), lambda: L)
    else:
        rec.identity("L_w = L_{-(w+1)}", lambda: calogero_moser(n, -w - 1), lambda: L)

    def sub_identity():
        lap = laplacian(n)
        dp, dm = SkewOperator.delta_pow(n, 1), SkewOperator.delta_pow(n, -1)
        parts = []
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                if i == j:
                    continue
                ratio = SkewOperator.from_locfrac(LocFrac.inverse_root(n, i, j) * LocFrac.delta_pow(n, 1))
                d_alpha = SkewOperator.d(n, i) - SkewOperator.d(n, j)
                parts.append(skew_mul(skew_mul(ratio, d_alpha), dm))
        return skew_mul(skew_mul(dp, lap), dm) - (lap - add_all(parts))

    rec.identity("delta Delta delta^-1 = Delta - sum_R (delta/alpha) d_alpha delta^-1", sub_identity)


def _symmetric_monomials(n: int, degree: int) -> list[tuple[tuple, Poly]]:
    out = []
    for d in range(degree + 1):
        for a in monomials(n, d):
            if list(a) != sorted(a, reverse=True):
                continue
            orbit = {w.permute(a) for w in all_perms(n)}
            p = Poly.zero(n)
            for b in sorted(orbit):
                p = p + Poly.monomial(n, b)
            out.append((a, p))
    return out


def _twist_shift(rec: _Recorder, n: int, opts: SuiteOptions):
    kappa = _kappa(opts)
    e = idempotent(n)
    d2, dm2 = SkewOperator.delta_pow(n, 2), SkewOperator.delta_pow(n, -2)

    def shift_check(z):
        return lambda: phi_twist(z, kappa + 1) - skew_mul(skew_mul(dm2, phi_twist(z, kappa)), d2)

    s12 = SkewOperator.group(Perm.transposition(n, 1, 2))
    rec.identity("phi(s(1,2)) = -s(1,2)", lambda: phi_twist(s12, kappa), lambda: -s12)
    rec.identity("phi(x1) = x1", lambda: phi_twist(SkewOperator.x(n, 1), kappa), lambda: SkewOperator.x(n, 1))
    for i in range(1, n + 1):
        rec.identity(
            f"phi(D_c(y{i})) = D_-c(y{i})",
            lambda i=i: phi_twist(dunkl(CherednikContext(n, kappa), i), kappa),
            lambda i=i: dunkl(CherednikContext(n, -kappa), i),
        )
    lap = nabla2(CherednikContext(n, kappa))
    rec.identity("phi_-c(phi_c(u)) = u on nabla2_c", lambda: phi_twist(phi_twist(lap, kappa), -kappa), lambda: lap)
    for a, p in _symmetric_monomials(n, opts.twist_degree):
        for k, tag in ((0, ""), (-2, " delta^-2")):
            f = LocFrac(p, 0, _normal=True) * LocFrac.delta_pow(n, k)
            z = skew_mul(SkewOperator.from_locfrac(f), e)
            rec.identity(f"phi_(c+1)(z) = delta^-2 phi_c(z) delta^2, z = m{list(a)}{tag} e", shift_check(z))
    rec.identity(
        "phi_(c+1)(z) = delta^-2 phi_c(z) delta^2, z = nabla2_c e", shift_check(skew_mul(lap, e))
    )


def _gr_suite(side):
    def suite(rec: _Recorder, n: int, opts: SuiteOptions):
        holder = {}

        def build():
            holder["cmp"] = gr_comparison(n, opts.m, side, opts.bounds, opts.slack, _kappa(opts), opts.progress)
            cmp = holder["cmp"]
            return "pass", f"{len(cmp.records)} bidegrees compared"

        rec.run(f"gr table side {side}, m={opts.m}, bounds={tuple(opts.bounds)}, slack={opts.slack}", build)
        cmp = holder["cmp"]

        def listing(records):
            return ", ".join(f"({r.bidegree[0]},{r.bidegree[1]}): {r.span_dim} vs {r.target_dim}" for r in records)

        rec.run(
            "no overflow",
            lambda: ("pass", "span never exceeds the target") if not cmp.overflow else ("fail", listing(cmp.overflow)),
        )
        rec.run(
            "symbols lie in the target span",
            lambda: ("pass", "every symbol is a member")
            if not cmp.nonmembers
            else ("fail", listing(cmp.nonmembers)),
        )
        trusted = [r for r in cmp.records if r.trusted]
        rec.run(
            "trusted region matches",
            lambda: (
                ("pass", f"{len(trusted)} bidegrees with i <= {opts.bounds[0]}, j <= {opts.bounds[1]} match")
                if not cmp.trusted_mismatches
                else ("fail", listing(cmp.trusted_mismatches))
            ),
        )
        deficits = cmp.untrusted_deficits
        rec.run(
            "untrusted region",
            lambda: ("skip", "deficits outside the trusted region (truncation): " + listing(deficits))
            if deficits
            else ("pass", "no deficits outside the trusted region"),
        )

    return suite


def good_oracle(r: Fraction, n: int) -> bool:
    """Direct reading of the definition: r is bad iff r lies in {a/b : 2 <= b <= n} and -1 < r < 0."""
    bad = {Fraction(a, b) for b in range(2, n + 1) for a in range(-b, 1)}
    return not (r in bad and -1 < r < 0)


def good_grid():
    return sorted({Fraction(p, q) for p in range(-6, 7) for q in range(1, 5)})


def _good_values(rec: _Recorder, n: int, opts: SuiteOptions):
    def table():
        grid = good_grid()
        wrong = [str(r) for r in grid if is_good(r, n) != good_oracle(r, n)]
        if wrong:
            return "fail", "disagreements at " + ", ".join(wrong)
        bad = [str(r) for r in grid if not is_good(r, n)]
        return "pass", f"{len(grid)} rationals p/q, |p| <= 6, 1 <= q <= 4; not good: {', '.join(bad)}"

    rec.run("is_good truth table", table)
    rec.run(
        "-1/2 is not good, 1/2 is good",
        lambda: ("pass", "as expected")
        if (not is_good(Fraction(-1, 2), n)) and is_good(Fraction(1, 2), n)
        else ("fail", "unexpected verdict"),
    )


SUITES = {
    "dunkl_commute": _dunkl_commute,
    "pbw_slices": _pbw_slices,
    "heckman": _heckman,
    "cm_appendix": _spherical_laplacian,
    "sc5_radial": _radial_part,
    "twist_lemma": _twist_shift,
    "qgr_main": _gr_suite("Q"),
    "pgr_main": _gr_suite("P"),
    "good_values": _good_values,
}


def run_suite(name: str, n: int, options: SuiteOptions | None = None) -> CheckReport:
    if name not in SUITES:
        raise UnknownSuite(f"unknown suite {name!r}; known: {', '.join(SUITES)}")
    if n < 2:
        raise ValueError("n must be at least 2")
    opts = options or SuiteOptions()
    report = CheckReport(name, n, opts.param)
    rec = _Recorder(report)
    if opts.param is not None:
        r = Fraction(opts.param)
        if is_good(r, n):
            rec.run("parameter", lambda: ("pass", f"c = {r} is good"))
        else:
            rec.run("parameter", lambda: ("skip", f"c = {r} is not good for n = {n}; recorded for information"))
    SUITES[name](rec, n, opts)
    return report


__all__ = ["Check", "CheckReport", "SUITES", "SuiteOptions", "good_oracle", "run_suite"]
