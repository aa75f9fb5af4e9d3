from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from rcakit.errors import ShapeError
from rcakit.isotypic import (
    DimensionTable,
    a_power_basis,
    exact_rank,
    hilbert_table,
    isotypic_basis,
    molien_dimension,
    project,
)
from rcakit.poly import Poly, all_perms
from rcakit.scalar import C, K

x1, x2, y1, y2 = Poly.x(2, 1), Poly.x(2, 2), Poly.y(2, 1), Poly.y(2, 2)


def test_sign_examples():
    b = isotypic_basis(2, "sign", (1, 0))
    assert b.dim == 1
    assert b.basis[0].scale(1 / b.basis[0].terms[(1, 0, 0, 0)]) == x1 - x2
    assert isotypic_basis(2, "sign", (0, 0)).dim == 0
    assert isotypic_basis(2, "sign", (1, 1)).dim == 2


def test_sign_11_span():
    basis = isotypic_basis(2, "sign", (1, 1)).basis
    expected = [x1 * y1 - x2 * y2, x1 * y2 - x2 * y1]
    keys = sorted({e for p in list(basis) + expected for e in p.terms})
    rows = [[p.terms.get(e, K(0)) for e in keys] for p in list(basis) + expected]
    assert exact_rank(rows) == 2


def test_a_power_examples():
    assert a_power_basis(2, 1, (1, 0)).dim == 1
    sq = a_power_basis(2, 2, (2, 0))
    assert sq.dim == 1
    p = sq.basis[0]
    assert p.scale(1 / p.terms[(2, 0, 0, 0)]) == (x1 - x2) ** 2
    for n in (2, 3):
        assert a_power_basis(n, 0, (0, 0)).dim == 1


@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("m", [0, 1, 2])
def test_a_power_equivariance(n, m):
    for bd in [(1, 1), (2, 1), (3, 0)]:
        for p in a_power_basis(n, m, bd).basis:
            for w in all_perms(n):
                assert p.act(w) == p.scale(w.sign ** m)


def test_a_power_is_an_invariant_module():
    inv = a_power_basis(2, 0, (1, 1)).basis
    a1 = a_power_basis(2, 1, (1, 0)).basis
    target = a_power_basis(2, 1, (2, 1)).basis
    keys = sorted({e for p in target for e in p.terms} | {e for f in inv for g in a1 for e in (f * g).terms})
    row = lambda p: [p.terms.get(e, K(0)) for e in keys]
    base = exact_rank([row(p) for p in target])
    assert exact_rank([row(p) for p in target] + [row(f * g) for f in inv for g in a1]) == base


def test_exact_rank_examples():
    assert exact_rank([[0, 0], [0, 0]]) == 0
    assert exact_rank([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == 3
    assert exact_rank([[K(1), C], [C, C * C]]) == 1
    assert exact_rank([[K(1), C], [C, C * C + 1]]) == 2
    assert exact_rank([]) == 0
    with pytest.raises(ShapeError):
        exact_rank([[1, 2], [3]])


def test_exact_rank_needs_generic_elimination():
    # rank drops at c = 1 and c = 2 but is full generically
    rows = [[C - 1, K(0)], [K(0), C - 2]]
    assert exact_rank(rows) == 2
    rows = [[C, C * C, K(1)], [K(1), C, K(0)], [C + 1, C * C + C, K(1)]]
    assert exact_rank(rows) == 2


@settings(max_examples=60)
@given(st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=1, max_size=4),
       st.fractions(min_value=-2, max_value=2, max_denominator=3))
def test_rank_is_generic_upper_bound(rows, r):
    mixed = [[K(a) + C * b for a, b in zip(row, row[::-1])] for row in rows]
    special = [[v.evaluate_at(r) for v in row] for row in mixed]
    assert exact_rank(special) <= exact_rank(mixed)


def test_molien_examples():
    assert molien_dimension(2, "triv", (0, 0)) == 1
    assert molien_dimension(2, "sign", (1, 1)) == 2
    for bd in [(0, 0), (3, 2), (4, 4)]:
        assert molien_dimension(2, "triv", bd) + molien_dimension(2, "sign", bd) == (bd[0] + 1) * (bd[1] + 1)


@pytest.mark.parametrize("n", [2, 3])
def test_molien_matches_trace_oracle(n):
    for i in range(5):
        for j in range(5 - i):
            for ch in ("triv", "sign"):
                assert molien_dimension(n, ch, (i, j)) == oracles.molien(n, ch, i, j)


def test_project_is_idempotent():
    p = x1 * x1 * y2 + x2 * 3
    for ch in ("triv", "sign"):
        q = project(p, ch)
        assert project(q, ch) == q


def test_hilbert_table():
    t = hilbert_table(2, "sign", 1, (1, 1))
    assert t[(1, 1)] == 2
    assert t.to_rows()[0] == {"i": 0, "j": 0, "dim": 0}
    assert hilbert_table(2, "triv", 3, (2, 2)) == hilbert_table(2, "triv", None, (2, 2))
    assert DimensionTable({(0, 0): 1, (1, 0): 0}) == DimensionTable({(0, 0): 1})
    with pytest.raises(ValueError):
        hilbert_table(2, "std", 1, (1, 1))
