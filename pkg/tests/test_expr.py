import pytest
from hypothesis import given, settings, strategies as st

from exprgen import corpus
from rcakit.cherednik import CherednikContext, dunkl, idempotent
from rcakit.errors import ExprError, ExprSyntaxError, IllegalNegativeExponent, IndexOutOfRange, RcaError
from rcakit.expr import Atom, Power, Product, Sum, elaborate, evaluate, parse, parse_function, render, tokenize
from rcakit.locfrac import LocFrac
from rcakit.poly import Perm, all_perms
from rcakit.scalar import C
from rcakit.skew import SkewOperator as S

CORPUS = [
    "0", "1", "-1/2", "c", "c^2 - 1", "(c+1)^-1", "x1", "x2^3", "x1*x2 - 3/4*x2",
    "d1", "d2^2", "d1*x1", "x1*d1 + 1", "del", "del^-1", "del^-3*x1", "del^2 - x1^2",
    "s(1,2)", "s(1,2)*x1", "s(1,2)*d1", "e", "e_", "e*e", "e*e_", "y1", "y2", "y1*y2",
    "y1^2 + y2^2", "e*y1*e", "e*del^-1*y1*e", "e*x1*y2*e", "(1 - s(1,2))*del^-1",
    "d1 - c*del^-1*(1 - s(1,2))", "c*(c-1)^-1*d1", "(x1 + x2)^2*y1", "y1*x1 - x1*y1",
    "del*y1*del^-1", "e_*del*e", "(2*c - 1)^-1*s(1,2)*x2", "x1*s(1,2)*x2", "-x1", "-(d1 + d2)",
    "3*c^2*del^-2*s(1,2)", "(y1 - y2)^2", "e*(x1*y1 + x2*y2)*e", "d1^2*del^-1",
    "x1^2*d2*s(1,2) - 5", "y1^3", "(1/3)^-2*x1", "((x1))",
]


def test_corpus_size():
    assert len(CORPUS) == 50


@pytest.mark.parametrize("src", CORPUS)
def test_corpus_round_trips(src):
    u = evaluate(src, 2)
    assert evaluate(render(u), 2) == u


def test_explicit_dunkl():
    assert evaluate("d1 - c * del^-1 * (1 - s(1,2))", 2) == dunkl(CherednikContext(2), 1)
    assert elaborate(parse("y1", 2), 2) == dunkl(CherednikContext(2), 1)


def test_ast_shapes():
    a = parse("e * e")
    assert isinstance(a, Product) and a.factors == (Atom("e", None, 0), Atom("e", None, 4))
    p = parse("del^-1")
    assert isinstance(p, Power) and p.exponent == -1
    s = parse("x1 - x2 + c")
    assert isinstance(s, Sum) and [sign for sign, _ in s.terms] == [1, -1, 1]


def test_index_errors():
    with pytest.raises(IndexOutOfRange) as info:
        parse("x3", 2)
    assert info.value.offset == 1
    with pytest.raises(IndexOutOfRange):
        evaluate("s(1,3)", 2)
    with pytest.raises(ExprSyntaxError):
        parse("s(2,2)")


def test_elaboration_examples():
    assert evaluate("del^-1 * del", 2) == S.one(2)
    assert evaluate("s(1,2)*x1", 2) == S.x(2, 2) * S.group(Perm.transposition(2, 1, 2))
    assert render(evaluate("s(1,2)*x1", 2)) == "x2*s(1,2)"


def test_negative_exponent_rules():
    assert evaluate("(c+1)^-1*(c+1)", 2) == S.one(2)
    for bad in ("x1^-1", "d1^-1", "(del + 1)^-1", "s(1,2)^-1"):
        with pytest.raises(IllegalNegativeExponent):
            evaluate(bad, 2)
    with pytest.raises(IllegalNegativeExponent):
        evaluate("(c - c)^-1", 2)


def test_render_examples():
    assert render(S.zero(2)) == "0"
    assert render(idempotent(2)) == "1/2 + 1/2*s(1,2)"
    assert render(evaluate("1 - c", 2)) == "1 - c"
    assert "y" not in render(evaluate("y1*y2", 3))


def test_group_elements_round_trip():
    for n in (2, 3, 4):
        for w in all_perms(n):
            u = S.group(w)
            assert evaluate(render(u), n) == u


def test_syntax_errors_carry_offsets():
    cases = {"x1 +": 4, "x1 ** x2": 4, "(x1": 3, "x": 0, "1/0": 2, "s(1 2)": 4}
    for src, offset in cases.items():
        with pytest.raises(ExprSyntaxError) as info:
            parse(src, 2)
        assert info.value.offset == offset, src
        assert f"offset {offset}" in str(info.value)


def test_non_ascii_rejected():
    with pytest.raises(ExprSyntaxError) as info:
        tokenize("x1 + δ")
    assert info.value.offset == 5


def test_depth_and_exponent_limits():
    with pytest.raises(ExprSyntaxError):
        parse("(" * 500 + "x1" + ")" * 500)
    assert evaluate("(" * 90 + "x1" + ")" * 90, 2) == S.x(2, 1)
    with pytest.raises(ExprSyntaxError):
        parse("x1^1000")


def test_parse_function():
    assert parse_function("x1*del^-1", 2) == LocFrac.x(2, 1) * LocFrac.delta_pow(2, -1)
    with pytest.raises(ExprSyntaxError):
        parse_function("d1", 2)


def test_whitespace_insensitive():
    assert evaluate(" x1 *\td1\n+ c ", 2) == evaluate("x1*d1+c", 2)


def test_formal_and_rational_parameters():
    u = evaluate("y1", 2, kappa=C.__class__.const(2))
    assert u == evaluate("d1 - 2*del^-1*(1 - s(1,2))", 2)


def test_fuzz_corpus_round_trips():
    for src in corpus(2000, seed=1):
        u = evaluate(src, 2)
        assert evaluate(render(u), 2) == u, src


@settings(max_examples=300)
@given(st.binary(max_size=40))
def test_parser_is_total_on_bytes(data):
    try:
        parse(data, 2)
    except ExprError:
        pass


@settings(max_examples=300)
@given(st.text(alphabet="xyd12 +-*^()/,cdelse_", max_size=30))
def test_kernel_never_panics_on_text(src):
    try:
        evaluate(src, 2)
    except RcaError:
        pass
