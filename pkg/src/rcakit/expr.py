"""Surface language for operators: a small recursive-descent parser and a canonical printer.

Grammar (whitespace-insensitive, left-associative)::

    expr   := term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := '-' factor | atom ('^' int)?
    atom   := rational | 'c' | 'x'<i> | 'y'<i> | 'd'<i> | 'del'
            | 's(' int ',' int ')' | 'e' | 'e_' | '(' expr ')'

``y<i>`` is the Dunkl operator with parameter c, ``d<i>`` the plain partial
derivative.  Offsets in errors count bytes of the UTF-8 source.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ExprSyntaxError, IllegalNegativeExponent, IndexOutOfRange, RcaError
from .locfrac import LocFrac
from .poly import Perm, Poly, _monomial_str, delta
from .scalar import C, FieldScalar, _poly_str

MAX_DEPTH = 100
MAX_EXPONENT = 64

# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Atom:
    kind: str  # num, c, x, y, d, del, s, e, e_
    value: object = None
    offset: int = 0


@dataclass(frozen=True)
class Power:
    base: object
    exponent: int
    offset: int = 0


@dataclass(frozen=True)
class Neg:
    operand: object
    offset: int = 0


@dataclass(frozen=True)
class Product:
    factors: tuple


@dataclass(frozen=True)
class Sum:
    terms: tuple  # ((+1 | -1), node)


# ---------------------------------------------------------------------------
# lexer


@dataclass
class Token:
    kind: str
    text: str
    offset: int


_PUNCT = {ord(ch): ch for ch in "+-*^(),/"}


def tokenize(src) -> list[Token]:
    data = src.encode("utf-8") if isinstance(src, str) else bytes(src)
    toks: list[Token] = []
    i, n = 0, len(data)
    while i < n:
        ch = data[i]
        if ch in b" \t\r\n":
            i += 1
        elif ch in _PUNCT:
            toks.append(Token(_PUNCT[ch], _PUNCT[ch], i))
            i += 1
        elif 48 <= ch <= 57:
            j = i
            while j < n and 48 <= data[j] <= 57:
                j += 1
            toks.append(Token("int", data[i:j].decode(), i))
            i = j
        elif 97 <= ch <= 122 or 65 <= ch <= 90 or ch == 95:
            j = i
            while j < n and (97 <= data[j] <= 122 or 65 <= data[j] <= 90 or data[j] == 95):
                j += 1
            toks.append(Token("name", data[i:j].decode(), i))
            i = j
        else:
            raise ExprSyntaxError(f"unexpected byte 0x{ch:02x}", i)
    toks.append(Token("end", "", n))
    return toks


# ---------------------------------------------------------------------------
# parser


class _Parser:
    def __init__(self, src, n):
        self.toks = tokenize(src)
        self.pos = 0
        self.n = n
        self.depth = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.pos]

    def take(self, kind=None, text=None) -> Token:
        t = self.tok
        if (kind and t.kind != kind) or (text is not None and t.text != text):
            want = text or kind
            got = t.text or "end of input"
            raise ExprSyntaxError(f"expected {want!r}, found {got!r}", t.offset)
        self.pos += 1
        return t

    def parse(self):
        node = self.expr()
        if self.tok.kind != "end":
            raise ExprSyntaxError(f"unexpected {self.tok.text!r}", self.tok.offset)
        return node

    def expr(self):
        terms = [(1, self.term())]
        while self.tok.kind in ("+", "-"):
            sign = 1 if self.take().kind == "+" else -1
            terms.append((sign, self.term()))
        return terms[0][1] if len(terms) == 1 and terms[0][0] == 1 else Sum(tuple(terms))

    def term(self):
        factors = [self.factor()]
        while self.tok.kind == "*":
            self.take()
            factors.append(self.factor())
        return factors[0] if len(factors) == 1 else Product(tuple(factors))

    def _enter(self):
        self.depth += 1
        if self.depth > MAX_DEPTH:
            raise ExprSyntaxError("expression nested too deeply", self.tok.offset)

    def factor(self):
        self._enter()
        try:
            return self._factor()
        finally:
            self.depth -= 1

    def _factor(self):
        if self.tok.kind == "-":
            off = self.take().offset
            return Neg(self.factor(), off)
        base = self.atom()
        if self.tok.kind == "^":
            off = self.take().offset
            neg = False
            if self.tok.kind == "-":
                self.take()
                neg = True
            tok = self.take("int")
            k = int(tok.text)
            if k > MAX_EXPONENT:
                raise ExprSyntaxError(f"exponent {k} exceeds the limit {MAX_EXPONENT}", tok.offset)
            return Power(base, -k if neg else k, off)
        return base

    def atom(self):
        t = self.tok
        if t.kind == "int":
            self.take()
            num = int(t.text)
            if self.tok.kind == "/":
                self.take()
                den_tok = self.take("int")
                den = int(den_tok.text)
                if den == 0:
                    raise ExprSyntaxError("zero denominator in rational literal", den_tok.offset)
                return Atom("num", Fraction(num, den), t.offset)
            return Atom("num", Fraction(num), t.offset)
        if t.kind == "(":
            self.take()
            node = self.expr()
            self.take(")")
            return node
        if t.kind != "name":
            raise ExprSyntaxError(f"unexpected {t.text or 'end of input'!r}", t.offset)
        self.take()
        name = t.text
        if name in ("c", "del", "e", "e_"):
            return Atom(name, None, t.offset)
        if name == "s":
            self.take("(")
            i = self._checked_int()
            self.take(",")
            j = self._checked_int()
            self.take(")")
            if i == j:
                raise ExprSyntaxError("transposition needs two distinct indices", t.offset)
            return Atom("s", (i, j), t.offset)
        if name in ("x", "y", "d"):
            # identifiers are letters only, so the index arrives as the next int token
            if self.tok.kind != "int" or self.tok.offset != t.offset + 1:
                raise ExprSyntaxError(f"{name!r} needs an index", t.offset)
            return Atom(name, self._checked_int(), t.offset)
        raise ExprSyntaxError(f"unknown identifier {name!r}", t.offset)

    def _checked_int(self) -> int:
        tok = self.take("int")
        i = int(tok.text)
        if self.n is not None and not 1 <= i <= self.n:
            raise IndexOutOfRange(f"index {i} out of range for n={self.n}", tok.offset)
        return i


def parse(src, n: int | None = None):
    """Parse source text into an AST; indices are range-checked when n is given."""
    return _Parser(src, n).parse()


# ---------------------------------------------------------------------------
# elaboration


def elaborate(ast, n: int, kappa=C):
    from .cherednik import CherednikContext, dunkl, idempotent
    from .skew import SkewOperator, add_all, skew_mul

    ctx = CherednikContext(n, kappa)

    def go(node):
        if isinstance(node, Atom):
            k = node.kind
            if k == "num":
                return SkewOperator.scalar(n, node.value)
            if k == "c":
                return SkewOperator.scalar(n, C)
            if k in ("x", "y", "d") and not 1 <= node.value <= n:
                raise IndexOutOfRange(f"index {node.value} out of range for n={n}", node.offset)
            if k == "x":
                return SkewOperator.x(n, node.value)
            if k == "y":
                return dunkl(ctx, node.value)
            if k == "d":
                return SkewOperator.d(n, node.value)
            if k == "del":
                return SkewOperator.delta_pow(n, 1)
            if k == "s":
                i, j = node.value
                if not (1 <= i <= n and 1 <= j <= n):
                    raise IndexOutOfRange(f"transposition ({i},{j}) out of range for n={n}", node.offset)
                return SkewOperator.group(Perm.transposition(n, i, j))
            if k == "e":
                return idempotent(n, "triv")
            if k == "e_":
                return idempotent(n, "sign")
            raise ExprSyntaxError(f"unknown atom {k!r}", node.offset)
        if isinstance(node, Neg):
            return -go(node.operand)
        if isinstance(node, Power):
            base = go(node.base)
            if node.exponent >= 0:
                return base ** node.exponent
            inv = _invert_monomial(base)
            if inv is None:
                raise IllegalNegativeExponent(
                    "negative exponents are only allowed on del and nonzero scalars", node.offset
                )
            return inv ** (-node.exponent)
        if isinstance(node, Product):
            out = go(node.factors[0])
            for f in node.factors[1:]:
                out = skew_mul(out, go(f))
            return out
        if isinstance(node, Sum):
            return add_all([go(t) if s > 0 else -go(t) for s, t in node.terms])
        raise TypeError(f"not an expression node: {node!r}")

    return go(ast)


def _invert_monomial(u):
    """Inverse of s * delta^k (s a nonzero scalar), or None for anything else."""
    from .skew import SkewOperator

    if len(u.terms) != 1:
        return None
    (a, w), f = next(iter(u.terms.items()))
    if any(a) or not w.is_identity():
        return None
    n = u.n
    num, k = f.num, f.k
    # numerator must be scalar * delta^j
    j = 0
    while not num.is_constant():
        q = num.divide_exact(delta(n))
        if q is None:
            return None
        num, j = q, j + 1
    s = num.constant_term()
    return SkewOperator.from_locfrac(LocFrac.delta_pow(n, k - j).scale(s.inverse()))


def evaluate(src: str, n: int, kappa=C):
    return elaborate(parse(src, n), n, kappa)


def parse_function(src: str, n: int) -> LocFrac:
    """Parse an expression that must denote a function (no derivatives or group terms)."""
    u = evaluate(src, n)
    if not u.terms:
        return LocFrac.zero(n)
    if len(u.terms) != 1:
        raise ExprSyntaxError("expected a function of x1..xn, got an operator", 0)
    (a, w), f = next(iter(u.terms.items()))
    if any(a) or not w.is_identity():
        raise ExprSyntaxError("expected a function of x1..xn, got an operator", 0)
    return f


# ---------------------------------------------------------------------------
# rendering


def _den_text(s: FieldScalar) -> str:
    from flint import fmpq_poly

    return f"({_poly_str(fmpq_poly(s.den))})^-1"


def render_scalar(s: FieldScalar) -> str:
    """Parseable text of an element of Q(c)."""
    if s.den.is_one():
        return _poly_str(s.num)
    neg, text = _scalar_factor(s)
    return ("-" if neg else "") + text


def _scalar_factor(s: FieldScalar) -> tuple[bool, str]:
    """(negative, text) for a scalar used as a product factor; text '' means 1."""
    text = _poly_str(s.num)
    single = sum(1 for q in s.num.coeffs() if q != 0) == 1
    neg = single and text.startswith("-")
    if neg:
        text = text[1:]
    if text == "1":
        text = ""
    elif not single:
        text = f"({text})"
    if not s.den.is_one():
        text = "*".join(t for t in (text, _den_text(s)) if t)
    return neg, text


def render_poly(p: Poly) -> str:
    """Parseable text of a polynomial in the x-variables."""
    if p.is_zero():
        return "0"
    if len(p.terms) == 1 and not any(next(iter(p.terms))):
        return render_scalar(next(iter(p.terms.values())))
    parts = []
    for e, v in p.sorted_terms():
        neg, coef = _scalar_factor(v)
        mono = _monomial_str(p.n, e)
        body = "*".join(t for t in (coef, mono) if t) or "1"
        parts.append((neg, body))
    return _join_signed(parts)


def _join_signed(parts) -> str:
    out = ("-" if parts[0][0] else "") + parts[0][1]
    for neg, body in parts[1:]:
        out += (" - " if neg else " + ") + body
    return out


def _d_str(a: tuple) -> str:
    return "*".join(f"d{i + 1}" if k == 1 else f"d{i + 1}^{k}" for i, k in enumerate(a) if k)


def _group_str(w: Perm) -> str:
    return "*".join(f"s({i},{j})" for i, j in w.transpositions())


def render(u) -> str:
    """Canonical, re-parseable text; Dunkl operators are printed in expanded form."""
    if not u.terms:
        return "0"
    if len(u.terms) == 1:
        (a, w), f = next(iter(u.terms.items()))
        if not any(a) and w.is_identity() and not f.k:
            return render_poly(f.num)
    parts = []
    for (a, w), f in u.sorted_terms():
        tail = [t for t in (_d_str(a), _group_str(w)) if t]
        dpart = f"del^-{f.k}" if f.k else ""
        if len(f.num.terms) == 1:
            (e, v), = f.num.terms.items()
            neg, coef = _scalar_factor(v)
            mono = _monomial_str(u.n, e)
            pieces = [t for t in (coef, mono, dpart, *tail) if t]
        else:
            neg = False
            pieces = [f"({render_poly(f.num)})"] + [t for t in (dpart, *tail) if t]
        parts.append((neg, "*".join(pieces) or "1"))
    return _join_signed(parts)


def render_symbol(sym) -> str:
    """Human-readable principal symbol: coefficient fractions times y-monomials and group elements."""
    if sym.is_zero():
        return "0"
    out = []
    for (b, w), f in sorted(sym.terms.items(), key=lambda t: (tuple(-k for k in t[0][0]), t[0][1])):
        ymono = "*".join(f"y{i + 1}" if k == 1 else f"y{i + 1}^{k}" for i, k in enumerate(b) if k)
        coef = str(f)
        if len(f.num.terms) > 1 or f.k:
            coef = f"({coef})"
        pieces = [p for p in (coef if coef != "1" else "", ymono, _group_str(w)) if p]
        out.append("*".join(pieces) or "1")
    return " + ".join(out)


def round_trips(u) -> bool:
    try:
        return evaluate(render(u), u.n) == u
    except RcaError:
        return False


__all__ = [
    "Atom",
    "Neg",
    "Power",
    "Product",
    "Sum",
    "elaborate",
    "evaluate",
    "parse",
    "parse_function",
    "render",
    "render_poly",
    "render_scalar",
    "render_symbol",
    "tokenize",
]
