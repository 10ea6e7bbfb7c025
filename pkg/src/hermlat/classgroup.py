"""Class groups of imaginary-quadratic fields via reduced binary quadratic forms."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache

from sympy import factorint

from .field import Field, FracIdeal, _egcd, hilbert_symbol, make_field

__all__ = [
    "QuadForm",
    "ClassGroup",
    "Guarantee",
    "reduce_form",
    "compose",
    "enumerate_classes",
    "class_group",
    "class_of_ideal",
    "ideal_of_form",
    "ideal_of_norm_in_class",
    "genus_character",
    "ideal_genus_cosets",
    "same_ideal_genus",
    "power_subgroup",
    "equality_guarantee",
]

REP_SEARCH_BOUND = 50


@dataclass(frozen=True, order=True)
class QuadForm:
    a: int
    b: int
    c: int

    @property
    def disc(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def __call__(self, x: int, y: int) -> int:
        return self.a * x * x + self.b * x * y + self.c * y * y

    def __iter__(self):
        return iter((self.a, self.b, self.c))

    def __repr__(self):
        return f"({self.a},{self.b},{self.c})"


def reduce_form(f, disc: int | None = None) -> QuadForm:
    a, b, c = f
    d = b * b - 4 * a * c
    if disc is not None and d != disc:
        raise ValueError(f"form {tuple(f)} has discriminant {d}, expected {disc}")
    if a <= 0 or d >= 0:
        raise ValueError(f"form {tuple(f)} is not positive definite")
    if math.gcd(math.gcd(a, b), c) != 1:
        raise ValueError(f"form {tuple(f)} is not primitive")
    while True:
        if b > a or b <= -a:
            # normalize b into (-a, a]
            k = (a - b) // (2 * a)
            c = a * k * k + b * k + c
            b = b + 2 * a * k
        if a > c:
            a, b, c = c, -b, a
            continue
        if a == c and b < 0:
            b = -b
        return QuadForm(a, b, c)


def compose(f: QuadForm, g: QuadForm) -> QuadForm:
    """Gauss composition (Shanks' formulation) followed by reduction."""
    if f.disc != g.disc:
        raise ValueError("discriminant mismatch")
    disc = f.disc
    a1, b1, c1 = f
    a2, b2, c2 = g
    if a1 > a2:
        a1, b1, c1, a2, b2, c2 = a2, b2, c2, a1, b1, c1
    s = (b1 + b2) // 2
    n = b2 - s
    if a2 % a1 == 0:
        y1, d = 0, a1
    else:
        d, u, _ = _egcd(a2, a1)
        y1 = u
    if s % d == 0:
        y2, x2, d1 = -1, 0, d
    else:
        d1, u, v = _egcd(s, d)
        x2, y2 = u, -v
    v1, v2 = a1 // d1, a2 // d1
    r = (y1 * y2 * n - x2 * c2) % v1
    b3 = b2 + 2 * v2 * r
    a3 = v1 * v2
    c3 = (b3 * b3 - disc) // (4 * a3)
    return reduce_form((a3, b3, c3))


def inverse_form(f: QuadForm) -> QuadForm:
    return reduce_form((f.a, -f.b, f.c))


def principal_form(disc: int) -> QuadForm:
    k = disc % 2
    return QuadForm(1, k, (k - disc) // 4)


def reduced_forms(disc: int) -> list[QuadForm]:
    """All reduced primitive positive definite forms of discriminant disc."""
    forms = []
    a = 1
    while 3 * a * a <= -disc:
        for b in range(-a + 1, a + 1):
            if (b * b - disc) % (4 * a):
                continue
            c = (b * b - disc) // (4 * a)
            if c < a or (a == c and b < 0):
                continue
            if math.gcd(math.gcd(a, b), c) == 1:
                forms.append(QuadForm(a, b, c))
        a += 1
    return sorted(forms)


class Guarantee(str, Enum):
    ALL_CLASSES = "ALL_CLASSES"
    WITHIN_IDEAL_GENUS = "WITHIN_IDEAL_GENUS"
    NONE = "NONE"


@dataclass
class ClassGroup:
    field: Field
    forms: list[QuadForm]
    elementary_divisors: list[int]
    generators: list[int]  # class indices, generator i has order elementary_divisors[-1 - i]
    char_table: list[tuple[int, ...]]
    table: list[list[int]] = field(repr=False)
    _index: dict = field(default_factory=dict, repr=False)
    _words: list = field(default_factory=list, repr=False)

    @property
    def h(self) -> int:
        return len(self.forms)

    @property
    def d_K(self) -> int:
        return self.field.d_K

    @property
    def identity(self) -> int:
        return 0

    @property
    def exponent(self) -> int:
        return self.elementary_divisors[-1] if self.elementary_divisors else 1

    def index(self, f) -> int:
        return self._index[reduce_form(f, self.d_K)]

    def mul(self, i: int, j: int) -> int:
        return self.table[i][j]

    def inv(self, i: int) -> int:
        return self._index[inverse_form(self.forms[i])]

    def pow(self, i: int, k: int) -> int:
        if k < 0:
            i, k = self.inv(i), -k
        r = 0
        for _ in range(k % self.order(i) if k else 0):
            r = self.table[r][i]
        return r

    def order(self, i: int) -> int:
        k, r = 1, i
        while r != 0:
            r = self.table[r][i]
            k += 1
        return k

    def squares(self) -> set[int]:
        return {self.table[i][i] for i in range(self.h)}

    def structure_string(self) -> str:
        if not self.elementary_divisors:
            return "1"
        return " x ".join(f"Z/{d}" for d in reversed(self.elementary_divisors))

    def exponents(self, i: int) -> tuple[int, ...]:
        """Exponent vector of class i on the canonical generators."""
        return self._words[i]

    def word(self, i: int) -> str:
        parts = []
        for letter, e in zip(_LETTERS, self._words[i]):
            if e == 1:
                parts.append(letter)
            elif e > 1:
                parts.append(f"{letter}^{e}")
        return "*".join(parts) if parts else "1"

    def from_word(self, word: str) -> int:
        word = word.strip()
        if word in ("1", "o", ""):
            return 0
        r = 0
        for part in word.split("*"):
            letter, _, exp = part.strip().partition("^")
            try:
                g = self.generators[_LETTERS.index(letter)]
            except (ValueError, IndexError):
                raise ValueError(f"unknown generator {letter!r} in class word {word!r}")
            r = self.table[r][self.pow(g, int(exp) if exp else 1)]
        return r

    def to_record(self) -> dict:
        return {
            "d_K": self.d_K,
            "h": self.h,
            "divisors": list(self.elementary_divisors),
            "generators": list(self.generators),
            "forms": [list(f) for f in self.forms],
            "char_table": [list(r) for r in self.char_table],
        }

    @classmethod
    def from_record(cls, rec: dict) -> ClassGroup:
        d_K = rec["d_K"]
        F = make_field(d_K if d_K % 4 == 1 else d_K // 4)
        forms = [QuadForm(*f) for f in rec["forms"]]
        return _assemble(
            F, forms, list(rec["divisors"]), list(rec["generators"]),
            [tuple(r) for r in rec["char_table"]],
        )


_LETTERS = "abcdefgh"


def _assemble(F, forms, divisors, gens, chars) -> ClassGroup:
    index = {f: i for i, f in enumerate(forms)}
    table = [[index[compose(f, g)] for g in forms] for f in forms]
    cg = ClassGroup(F, forms, divisors, gens, chars, table, index)
    # exponent words on the generators
    words = {0: tuple(0 for _ in gens)}
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for k, g in enumerate(gens):
                y = table[x][g]
                if y not in words:
                    e = list(words[x])
                    e[k] += 1
                    words[y] = tuple(e)
                    nxt.append(y)
        frontier = nxt
    cg._words = [words[i] for i in range(len(forms))]
    return cg


def _invariant_factors(h: int, orders: list[int], table) -> list[int]:
    """Invariant factors d1 | d2 | ... from counts of elements killed by p^k."""
    by_prime = {}
    for p, e in factorint(h).items():
        counts = [sum(1 for o in orders if (p**k) % o == 0) for k in range(e + 1)]
        # number of cyclic p-factors of order >= p^k
        ge = [round(math.log(counts[k] / counts[k - 1], p)) for k in range(1, e + 1)]
        exps = []
        for k in range(len(ge)):
            nxt = ge[k + 1] if k + 1 < len(ge) else 0
            exps += [k + 1] * (ge[k] - nxt)
        by_prime[p] = sorted(exps, reverse=True)
    r = max((len(v) for v in by_prime.values()), default=0)
    divisors = []
    for i in range(r):
        d = 1
        for p, exps in by_prime.items():
            if i < len(exps):
                d *= p ** exps[i]
        divisors.append(d)
    return sorted(divisors)


def _find_generators(h, table, orders, divisors) -> list[int]:
    """First (in form order) generator tuple realizing the divisor decomposition."""
    targets = list(reversed(divisors))

    def span(gens):
        elems = {0}
        frontier = [0]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = table[x][g]
                    if y not in elems:
                        elems.add(y)
                        nxt.append(y)
            frontier = nxt
        return elems

    def search(chosen, size):
        k = len(chosen)
        if k == len(targets):
            return chosen
        for g in range(h):
            if orders[g] != targets[k]:
                continue
            if len(span(chosen + [g])) != size * targets[k]:
                continue
            found = search(chosen + [g], size * targets[k])
            if found is not None:
                return found
        return None

    found = search([], 1)
    if found is None:
        raise RuntimeError("no generating set matches the invariant factors")
    return found


def represented_value(f: QuadForm, modulus: int, bound: int = REP_SEARCH_BOUND):
    """Smallest positive value f(x, y) coprime to modulus, with gcd(x, y) = 1; returns (m, x, y)."""
    best = None
    for x in range(-bound, bound + 1):
        for y in range(0, bound + 1):
            if y == 0 and x <= 0:
                continue
            if math.gcd(x, y) != 1:
                continue
            m = f(x, y)
            if math.gcd(m, modulus) == 1 and (best is None or m < best[0]):
                best = (m, x, y)
    if best is None:
        raise RuntimeError(f"no value of {f} coprime to {modulus} with |x|,|y| <= {bound}")
    return best


def _char_row(F: Field, f: QuadForm) -> tuple[int, ...]:
    m, _, _ = represented_value(f, 2 * F.d_K)
    return tuple(hilbert_symbol(m, F.D, p) for p in F.ramified_primes)


def enumerate_classes(F: Field) -> ClassGroup:
    forms = reduced_forms(F.d_K)
    index = {f: i for i, f in enumerate(forms)}
    table = [[index[compose(f, g)] for g in forms] for f in forms]
    h = len(forms)
    orders = []
    for i in range(h):
        k, r = 1, i
        while r != 0:
            r = table[r][i]
            k += 1
        orders.append(k)
    divisors = _invariant_factors(h, orders, table)
    gens = _find_generators(h, table, orders, divisors)
    chars = [_char_row(F, f) for f in forms]
    return _assemble(F, forms, divisors, gens, chars)


@lru_cache(maxsize=512)
def class_group(F: Field) -> ClassGroup:
    """Memoized enumerate_classes."""
    return enumerate_classes(F)


def ideal_of_form(F: Field, f: QuadForm) -> FracIdeal:
    """The ideal [a, (-b + sqrt(d_K))/2] attached to the form (a, b, c)."""
    a, b, _ = f
    # (-b + sqrt(d_K))/2 in omega coordinates
    if F.omega_mode == "half":
        gen = F.from_omega_coords((-b - 1) // 2, 1)
    else:
        gen = F.from_omega_coords(-b // 2, 1)
    return FracIdeal._from_zgens(F, [F.elem(a), gen])


def form_of_ideal(I: FracIdeal) -> QuadForm:
    F = I.field
    _, a, b = I.primitive_part()
    if F.omega_mode == "half":
        fb = -(2 * b + 1)
    else:
        fb = -2 * b
    return reduce_form((a, fb, (fb * fb - F.d_K) // (4 * a)))


def class_of_ideal(CG: ClassGroup, I: FracIdeal) -> int:
    return CG._index[form_of_ideal(I)]


def ideal_of_norm_in_class(CG: ClassGroup, c: int, modulus: int | None = None) -> FracIdeal:
    """An integral ideal in class c whose norm is small and coprime to modulus (default 2*d_K)."""
    F = CG.field
    if c == 0:
        return F.unit_ideal
    f = CG.forms[c]
    modulus = 2 * F.d_K if modulus is None else modulus
    m, x, y = represented_value(f, modulus)
    # move (x, y) to the first basis vector: f o [[x, -s], [y, r]] with x r + y s = 1
    _, r, s = _egcd(x, y)
    b2 = 2 * f.a * x * (-s) + f.b * (x * r - y * s) + 2 * f.c * y * r
    g = reduce_form((m, b2, (b2 * b2 - F.d_K) // (4 * m)))
    if g != f:
        raise AssertionError("form transformation left the class")
    I = ideal_of_form(F, QuadForm(m, b2, (b2 * b2 - F.d_K) // (4 * m)))
    if class_of_ideal(CG, I) != c:
        raise AssertionError("ideal representative left the class")
    return I


def genus_character(CG: ClassGroup, p: int, c: int) -> int:
    F = CG.field
    if p not in F.ramified_primes:
        raise ValueError(f"{p} is not ramified in {F}")
    return CG.char_table[c][F.ramified_primes.index(p)]


def ideal_genus_cosets(CG: ClassGroup) -> dict[tuple[int, ...], list[int]]:
    """Classes grouped by character vector, keyed by that vector."""
    blocks: dict[tuple[int, ...], list[int]] = {}
    for i, row in enumerate(CG.char_table):
        blocks.setdefault(row, []).append(i)
    return blocks


def same_ideal_genus(CG: ClassGroup, c1: int, c2: int) -> bool:
    by_chars = CG.char_table[c1] == CG.char_table[c2]
    by_squares = CG.mul(c1, CG.inv(c2)) in CG.squares()
    if by_chars != by_squares:
        raise AssertionError(f"genus tests disagree for classes {c1}, {c2} of d_K={CG.d_K}")
    return by_chars


def power_subgroup(CG: ClassGroup, n: int) -> set[int]:
    if n < 1:
        raise ValueError("n must be positive")
    return {CG.pow(i, n) for i in range(CG.h)}


def equality_guarantee(CG: ClassGroup, n: int) -> Guarantee:
    """Which partial class numbers of rank-n genera are forced equal by the scaling bijections."""
    if n < 1:
        raise ValueError("rank must be positive")
    if n in (1, 3) or math.gcd(n, CG.h) == 1:
        return Guarantee.ALL_CLASSES
    if n == 2 or math.gcd(n, CG.exponent) <= 2:
        return Guarantee.WITHIN_IDEAL_GENUS
    return Guarantee.NONE
