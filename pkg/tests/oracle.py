"""Independent reference implementations used to cross-check the package.

Nothing here imports hermlat: characters come from sympy's Jacobi symbol,
Bernoulli polynomials from sympy, class numbers from counting reduced forms.
"""

import itertools
from fractions import Fraction
from math import gcd, isqrt, prod

import sympy
from sympy import Rational, bernoulli, factorint, symbols
from sympy.functions.combinatorial.numbers import jacobi_symbol

X = symbols("X")


def kronecker(d, a):
    """Kronecker symbol (d / a) for a > 0, built prime by prime."""
    r = 1
    for p, e in factorint(a).items():
        if p == 2:
            if d % 2 == 0:
                v = 0
            else:
                v = 1 if d % 8 in (1, 7) else -1
        else:
            v = jacobi_symbol(d % p, p) if d % p else 0
        r *= v**e
    return r


def is_fundamental(d):
    if d >= 0:
        return False
    if d % 4 == 1:
        return all(e == 1 for e in factorint(-d).values())
    if d % 4 == 0:
        D = d // 4
        return D % 4 in (2, 3) and all(e == 1 for e in factorint(-D).values())
    return False


def units(d):
    return {-3: 6, -4: 4}.get(d, 2)


def class_number(d):
    """Number of reduced primitive positive forms of discriminant d."""
    h = 0
    a = 1
    while 3 * a * a <= -d:
        for b in range(-a + 1, a + 1):
            if (b * b - d) % (4 * a):
                continue
            c = (b * b - d) // (4 * a)
            if c < a or gcd(gcd(a, b), c) != 1:
                continue
            if b < 0 and a == c:
                continue
            h += 1
        a += 1
    return h


def gen_bernoulli(d, j):
    f = -d
    if j % 2 == 0:
        return Fraction(str(bernoulli(j)))
    P = sympy.Poly(bernoulli(j, X), X)
    s = sum(kronecker(d, a) * P.eval(Rational(a, f)) for a in range(1, f + 1))
    return Fraction(str(f ** (j - 1) * s))


def genera(d, n):
    """(parity, {p: eps_p}) for every genus of rank n."""
    D = d if d % 4 == 1 else d // 4
    ram = sorted(factorint(-d))
    out = []
    for eps in itertools.product([1, -1], repeat=len(ram)):
        if prod(eps) != 1:
            continue
        e = dict(zip(ram, eps))
        out.append(("odd", e))
        if d % 2 == 0 and n % 2 == 0 and (D % 4 != 3 or e[2] == (-1) ** (n // 2)):
            out.append(("even", e))
    return out


def local_factor(d, n, parity, eps, p):
    D = d if d % 4 == 1 else d // 4
    if n % 2:
        return Fraction(1)
    if p != 2:
        return 1 + eps[p] * Fraction((-1) ** ((p - 1) // 2) * p) ** (-(n // 2))
    if parity == "odd":
        return 1 - Fraction(1, 2**n)
    if d % 8 == 4:
        return Fraction(1, 2 ** (n - 1))
    return Fraction(1, 2**n) * (1 + eps[2] * Fraction((-1) ** ((D - 2) // 4) * 2) ** (-(n // 2)))


def partial_mass(d, n, parity, eps):
    m = Fraction(1, units(d))
    for j in range(2, n + 1):
        m *= abs(gen_bernoulli(d, j)) / (2 * j)
    for p in eps:
        m *= local_factor(d, n, parity, eps, p)
    if n % 2 == 0:
        m *= (-d) ** (n // 2)
    return m


def hilbert(a, b, p):
    """Hilbert symbol (a, b)_p for nonzero integers; p = -1 is the real place."""
    if p == -1:
        return -1 if a < 0 and b < 0 else 1

    def split(x):
        v = 0
        while x % p == 0:
            x //= p
            v += 1
        return v, x

    al, u = split(a)
    be, v = split(b)
    if p != 2:
        s = (-1) ** (al * be * ((p - 1) // 2))
        return s * jacobi_symbol(u % p, p) ** be * jacobi_symbol(v % p, p) ** al
    e = lambda x: ((x - 1) // 2) % 2
    w = lambda x: ((x * x - 1) // 8) % 2
    return (-1) ** ((e(u) * e(v) + al * w(v) + be * w(u)) % 2)


def short_vectors_box(G, bound):
    """Brute force over a box large enough to contain every vector of norm <= bound."""
    import numpy as np

    G = np.asarray(G, dtype=np.int64)
    n = G.shape[0]
    inv = np.linalg.inv(G.astype(float))
    r = [isqrt(int(bound * inv[i, i]) + 1) + 1 for i in range(n)]
    out = set()
    for x in itertools.product(*[range(-k, k + 1) for k in r]):
        v = np.array(x)
        q = int(v @ G @ v)
        if 0 < q <= bound:
            out.add(x if next(c for c in x if c) > 0 else tuple(-c for c in x))
    return out
