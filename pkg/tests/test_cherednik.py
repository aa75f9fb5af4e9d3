from fractions import Fraction

import pytest
import sympy as sp

import oracles
from exprgen import corpus
from rcakit.cherednik import (
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
from rcakit.errors import ArityMismatch
from rcakit.expr import evaluate
from rcakit.locfrac import LocFrac
from rcakit.poly import Perm, Poly
from rcakit.scalar import C, K
from rcakit.skew import SkewOperator as S, apply, gamma_degree, substitute_c


def to_sympy(f: LocFrac):
    n = f.n
    xs = oracles.xs(n)
    out = 0
    for e, v in f.num.terms.items():
        mono = sp.Mul(*[xs[i] ** e[i] for i in range(n)])
        out += sp.sympify(str(v), locals={"c": oracles.c}) * mono
    return out / oracles.vandermonde(n) ** f.k


def poly(n, terms):
    return LocFrac(Poly(n, {e + (0,) * n: K(v) for e, v in terms.items()}), 0)


TEST_FUNCTIONS = {
    2: [poly(2, {(1, 0): 1}), poly(2, {(2, 1): 1, (0, 1): -3}), poly(2, {(3, 0): 2, (1, 2): 1})],
    3: [poly(3, {(1, 0, 0): 1}), poly(3, {(2, 0, 1): 1, (0, 1, 1): 5}), poly(3, {(1, 1, 1): 1, (3, 0, 0): 1})],
}


def test_dunkl_explicit_form():
    assert dunkl(CherednikContext(2), 1) == evaluate("d1 - c*del^-1*(1 - s(1,2))", 2)


def test_dunkl_action_examples():
    d1 = dunkl(CherednikContext(2), 1)
    assert apply(d1, LocFrac.one(2)).is_zero()
    assert apply(d1, LocFrac.x(2, 1)) == LocFrac.one(2).scale(1 - C)


@pytest.mark.parametrize("n", [2, 3])
def test_dunkl_matches_oracle(n):
    for f in TEST_FUNCTIONS[n]:
        for i in range(1, n + 1):
            got = to_sympy(apply(dunkl(CherednikContext(n), i), f))
            assert oracles.is_zero(got - oracles.dunkl(to_sympy(f), n, i))


@pytest.mark.parametrize("n", [2, 3])
def test_nabla2_matches_oracle(n):
    for f in TEST_FUNCTIONS[n][:2]:
        got = to_sympy(apply(nabla2(CherednikContext(n)), f))
        assert oracles.is_zero(got - oracles.nabla2(to_sympy(f), n))


def test_frozen_dunkl_values():
    # values produced by the sympy oracle in tests/oracles.py
    x1, x2 = LocFrac.x(2, 1), LocFrac.x(2, 2)
    d1 = dunkl(CherednikContext(2), 1)
    d2 = dunkl(CherednikContext(2), 2)
    assert apply(d1, x1 * x1) == x1.scale(2 - C) - x2.scale(C)
    assert apply(d2, x1 * x1 * x2) == x1 * x1 + (x1 * x2).scale(C)


def test_rank_must_be_at_least_two():
    with pytest.raises(ArityMismatch):
        CherednikContext(1)
    with pytest.raises(ArityMismatch):
        dunkl(CherednikContext(2), 3)


def test_idempotents():
    e3 = idempotent(3)
    assert e3 * e3 == e3
    assert (idempotent(2) * idempotent(2, "sign")).is_zero()
    assert S.group(Perm.transposition(2, 1, 2)) * idempotent(2) == idempotent(2)


def test_nabla2_basics():
    assert nabla2(CherednikContext(3, 0)) == laplacian(3)
    assert gamma_degree(nabla2(CherednikContext(3))) == 2
    sandwiched = nabla2(CherednikContext(2)) * idempotent(2)
    assert max(f.k for f in sandwiched.terms.values()) == 1


def test_calogero_moser():
    w = C
    expected = laplacian(2) + S.from_locfrac(LocFrac.delta_pow(2, -2).scale(-2 * w * (w + 1)))
    assert calogero_moser(2, w) == expected
    assert calogero_moser(3, 0) == laplacian(3)
    L = calogero_moser(3, C)
    assert substitute_c(L, -C - 1) == L


def test_calogero_moser_matches_oracle():
    w = sp.Rational(2, 3)
    for f in TEST_FUNCTIONS[3][:2]:
        got = to_sympy(apply(calogero_moser(3, Fraction(2, 3)), f))
        assert oracles.is_zero(got - oracles.calogero_moser(to_sympy(f), 3, w))


def test_theta():
    w = C
    expected = evaluate("d1^2 + d2^2 + 2*c*del^-1*(d1 - d2) + 2*c*(c - 1)*del^-2", 2)
    assert theta_spher(laplacian(2), w) == expected
    # integer exponent agrees with honest products
    assert theta_spher(laplacian(2), 1) == S.delta_pow(2, -1) * laplacian(2) * S.delta_pow(2, 1)
    u = evaluate("x1*d2^2 + c*d1", 3)
    assert theta_spher(u, 0) == u
    assert theta_spher(S.x(2, 1), w) == S.x(2, 1)


def test_phi():
    s = S.group(Perm.transposition(2, 1, 2))
    assert phi_twist(s) == -s
    assert phi_twist(S.x(2, 1)) == S.x(2, 1)
    for n in (2, 3):
        for i in range(1, n + 1):
            assert phi_twist(dunkl(CherednikContext(n), i)) == dunkl(CherednikContext(n, -C), i)


def test_phi_is_multiplicative():
    u = evaluate("x1*y2 + s(1,2)*y1^2", 2)
    v = evaluate("y1*x2 - del^-1*s(1,2)", 2)
    assert phi_twist(u * v) == phi_twist(u) * phi_twist(v)


@pytest.mark.parametrize("src", corpus(25, seed=7))
def test_phi_inverse_twist_undoes_phi(src):
    u = evaluate(src, 2)
    assert phi_twist(phi_twist(u), -C) == u


def test_radial_rhs():
    assert radial_rhs(2, 0) == evaluate("d1^2 + d2^2 + 2*del^-1*(d1 - d2)", 2)
    assert gamma_degree(radial_rhs(3, C)) == 2


@pytest.mark.parametrize(
    "r, n, expected",
    [(Fraction(-1, 2), 2, False), (Fraction(1, 2), 2, True), (Fraction(5), 3, True),
     (Fraction(-2, 3), 3, False), (Fraction(-2, 3), 2, True), (Fraction(-1), 4, True), (Fraction(0), 4, True)],
)
def test_is_good(r, n, expected):
    assert is_good(r, n) is expected


def test_is_good_matches_definition():
    grid = {Fraction(p, q) for p in range(-6, 7) for q in range(1, 5)}
    for n in (2, 3, 4):
        for r in grid:
            assert is_good(r, n) == oracles.good(r, n), (r, n)
