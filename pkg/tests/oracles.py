"""Independent reference implementations used to cross-check the kernel.

Everything here works on concrete functions with sympy, never on operator
normal forms, so it shares no code path with the package.
"""

from fractions import Fraction
from itertools import permutations, product
from math import factorial

import sympy as sp

c = sp.Symbol("c")


def xs(n):
    return sp.symbols(f"x1:{n + 1}")


def swap(f, n, i, j):
    """s_ij acting on a function: exchange x_i and x_j (1-based)."""
    x = xs(n)
    return f.subs({x[i - 1]: x[j - 1], x[j - 1]: x[i - 1]}, simultaneous=True)


def permute(f, n, images):
    """w.f where (w.f)(x) has x_k replaced by x_{w(k)}; images are 1-based."""
    x = xs(n)
    return f.subs({x[k]: x[images[k] - 1] for k in range(n)}, simultaneous=True)


def sign(images):
    s = 1
    im = list(images)
    for a in range(len(im)):
        for b in range(a + 1, len(im)):
            if im[a] > im[b]:
                s = -s
    return s


def vandermonde(n):
    x = xs(n)
    out = sp.Integer(1)
    for i in range(n):
        for j in range(i + 1, n):
            out *= x[i] - x[j]
    return out


def dunkl(f, n, i, kappa=c):
    x = xs(n)
    out = sp.diff(f, x[i - 1])
    for k in range(1, n + 1):
        if k != i:
            out -= kappa * (f - swap(f, n, i, k)) / (x[i - 1] - x[k - 1])
    return out


def nabla2(f, n, kappa=c):
    return sum(dunkl(dunkl(f, n, i, kappa), n, i, kappa) for i in range(1, n + 1))


def sym(f, n, character="triv"):
    perms = list(permutations(range(1, n + 1)))
    total = sum((sign(w) if character == "sign" else 1) * permute(f, n, w) for w in perms)
    return total / factorial(n)


def calogero_moser(f, n, w):
    x = xs(n)
    out = sum(sp.diff(f, v, 2) for v in x)
    pot = sum(sp.Integer(2) / (x[i] - x[j]) ** 2 for i in range(n) for j in range(i + 1, n))
    return out - w * (w + 1) * pot * f


def is_zero(expr):
    return sp.simplify(sp.together(sp.expand(expr))) == 0


def molien(n, character, i, j):
    """dim of the character-isotypic part of C[x, y] in bidegree (i, j), by averaging traces.

    Each permutation permutes monomials, so its trace is the number of fixed monomials.
    """
    total = Fraction(0)
    monos = [(a, b) for a in _compositions(i, n) for b in _compositions(j, n)]
    for w in permutations(range(n)):
        fixed = 0
        for a, b in monos:
            if all(a[w[k]] == a[k] for k in range(n)) and all(b[w[k]] == b[k] for k in range(n)):
                fixed += 1
        chi = sign([v + 1 for v in w]) if character == "sign" else 1
        total += chi * fixed
    return total / factorial(n)


def _compositions(d, n):
    return [e for e in product(range(d + 1), repeat=n) if sum(e) == d]


def good(r, n):
    """Direct transcription: C = {a/b : a, b integers, 2 <= b <= n}, good iff r not in C meet (-1, 0)."""
    in_c = any(Fraction(a, b) == r for b in range(2, n + 1) for a in range(-b * 7, b * 7 + 1))
    return not (in_c and -1 < r < 0)
