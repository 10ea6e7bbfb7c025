"""Arithmetic in an imaginary-quadratic field K = Q(sqrt(D)).

Elements are stored on the basis {1, sqrt(D)} with rational coordinates.
Fractional ideals are stored as a Hermite normal form on the integral basis
{1, w} of the maximal order, where w = sqrt(D) (D = 2, 3 mod 4) or
w = (1 + sqrt(D))/2 (D = 1 mod 4).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from sympy import factorint, isprime

__all__ = [
    "Field",
    "FieldElem",
    "FracIdeal",
    "make_field",
    "is_squarefree",
    "is_fundamental_discriminant",
    "fundamental_discriminants",
    "field_from_discriminant",
    "kronecker",
    "chi_K",
    "splitting_type",
    "hilbert_symbol",
    "norm_residue_symbol",
]


def is_squarefree(n: int) -> bool:
    if n == 0:
        return False
    return all(e == 1 for e in factorint(abs(n)).values())


def is_fundamental_discriminant(d: int) -> bool:
    """True for negative fundamental discriminants (d = D, D = 1 mod 4, or d = 4D, D = 2, 3 mod 4)."""
    if d >= 0:
        return False
    if d % 4 == 1:
        return is_squarefree(d)
    if d % 4 == 0:
        D = d // 4
        return D % 4 in (2, 3) and is_squarefree(D)
    return False


def fundamental_discriminants(limit: int):
    """Negative fundamental discriminants with |d| <= limit, by increasing |d|."""
    return [d for d in range(-3, -limit - 1, -1) if is_fundamental_discriminant(d)]


@dataclass(frozen=True)
class Field:
    D: int
    d_K: int
    omega_mode: str  # "half" if D = 1 mod 4 else "root"
    ramified_primes: tuple[int, ...]
    t: int
    w: int

    def __str__(self):
        return f"Q(sqrt({self.D}))"

    def elem(self, x=0, y=0) -> FieldElem:
        return FieldElem(Fraction(x), Fraction(y), self.D)

    @property
    def one(self) -> FieldElem:
        return self.elem(1)

    @property
    def sqrtD(self) -> FieldElem:
        return self.elem(0, 1)

    @property
    def omega(self) -> FieldElem:
        if self.omega_mode == "half":
            return self.elem(Fraction(1, 2), Fraction(1, 2))
        return self.elem(0, 1)

    @property
    def omega_trace(self) -> int:
        return 1 if self.omega_mode == "half" else 0

    @property
    def omega_norm(self) -> int:
        return (1 - self.D) // 4 if self.omega_mode == "half" else -self.D

    def to_omega_coords(self, u: FieldElem) -> tuple[Fraction, Fraction]:
        """Coordinates (s, t) with u = s + t*omega."""
        if self.omega_mode == "half":
            return u.x - u.y, 2 * u.y
        return u.x, u.y

    def from_omega_coords(self, s, t) -> FieldElem:
        s, t = Fraction(s), Fraction(t)
        if self.omega_mode == "half":
            return self.elem(s + t / 2, t / 2)
        return self.elem(s, t)

    def is_integral(self, u: FieldElem) -> bool:
        if self.omega_mode == "root":
            return u.x.denominator == 1 and u.y.denominator == 1
        x2, y2 = 2 * u.x, 2 * u.y
        return (
            x2.denominator == 1
            and y2.denominator == 1
            and (x2.numerator - y2.numerator) % 2 == 0
        )

    @property
    def unit_ideal(self) -> FracIdeal:
        return FracIdeal(self.D, 1, 1, 0, 1)

    def ideal(self, *gens) -> FracIdeal:
        """The o-ideal generated by the given elements (or rationals)."""
        return FracIdeal.from_generators(self, gens)


@lru_cache(maxsize=None)
def make_field(D: int) -> Field:
    """Build Q(sqrt(D)) for squarefree D < 0."""
    if D >= 0 or not is_squarefree(D):
        raise ValueError(f"D must be a squarefree negative integer, got {D}")
    d_K = D if D % 4 == 1 else 4 * D
    ramified = tuple(sorted(factorint(-d_K)))
    w = {-3: 6, -4: 4}.get(d_K, 2)
    return Field(D, d_K, "half" if D % 4 == 1 else "root", ramified, len(ramified), w)


def field_from_discriminant(d_K: int) -> Field:
    if not is_fundamental_discriminant(d_K):
        raise ValueError(f"{d_K} is not a negative fundamental discriminant")
    return make_field(d_K if d_K % 4 == 1 else d_K // 4)


@dataclass(frozen=True)
class FieldElem:
    x: Fraction
    y: Fraction
    D: int

    def _coerce(self, other) -> FieldElem:
        if isinstance(other, FieldElem):
            if other.D != self.D:
                raise ValueError("elements of different fields")
            return other
        return FieldElem(Fraction(other), Fraction(0), self.D)

    def __add__(self, other):
        o = self._coerce(other)
        return FieldElem(self.x + o.x, self.y + o.y, self.D)

    __radd__ = __add__

    def __neg__(self):
        return FieldElem(-self.x, -self.y, self.D)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        return FieldElem(
            self.x * o.x + self.D * self.y * o.y, self.x * o.y + self.y * o.x, self.D
        )

    __rmul__ = __mul__

    def conj(self) -> FieldElem:
        return FieldElem(self.x, -self.y, self.D)

    def norm(self) -> Fraction:
        return self.x * self.x - self.D * self.y * self.y

    def trace(self) -> Fraction:
        return 2 * self.x

    def inverse(self) -> FieldElem:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero element")
        return FieldElem(self.x / n, -self.y / n, self.D)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0

    def is_rational(self) -> bool:
        return self.y == 0

    def __eq__(self, other):
        if isinstance(other, FieldElem):
            return self.D == other.D and self.x == other.x and self.y == other.y
        if isinstance(other, (int, Fraction)):
            return self.y == 0 and self.x == other
        return NotImplemented

    def __hash__(self):
        return hash((self.x, self.y, self.D))

    def __repr__(self):
        if self.y == 0:
            return str(self.x)
        root = f"sqrt({self.D})"
        if self.x == 0:
            return f"{self.y}*{root}"
        sign = "+" if self.y > 0 else "-"
        return f"{self.x} {sign} {abs(self.y)}*{root}"


def _egcd(a: int, b: int):
    if b == 0:
        return (abs(a), 1 if a >= 0 else -1, 0)
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def _hnf2(vectors) -> tuple[int, int, int]:
    """HNF (A, B, C) of the Z-span of integer pairs: basis (A, 0), (B, C), 0 <= B < A."""
    pivot = None
    a_gcd = 0
    for v in vectors:
        x, y = v
        if x == 0 and y == 0:
            continue
        if pivot is None:
            if y == 0:
                a_gcd = math.gcd(a_gcd, x)
            else:
                pivot = (x, y)
            continue
        px, py = pivot
        if y == 0:
            a_gcd = math.gcd(a_gcd, x)
            continue
        g, s, t = _egcd(py, y)
        pivot = (s * px + t * x, g)
        a_gcd = math.gcd(a_gcd, (y // g) * px - (py // g) * x)
    if pivot is None or a_gcd == 0:
        raise ValueError("generators do not span a rank-2 lattice")
    px, py = pivot
    if py < 0:
        px, py = -px, -py
    return a_gcd, px % a_gcd, py


@dataclass(frozen=True)
class FracIdeal:
    """(1/q) * (a*Z + (b + c*w)*Z) in canonical form.

    Canonical: q > 0, a > 0, c > 0, 0 <= b < a, gcd(q, a, b, c) = 1.
    The o-module condition is c | a, c | b and (a/c) | N(b/c + w).
    """

    D: int
    q: int
    a: int
    b: int
    c: int

    @property
    def field(self) -> Field:
        return make_field(self.D)

    @classmethod
    def from_generators(cls, F: Field, gens) -> FracIdeal:
        elems = [g if isinstance(g, FieldElem) else F.elem(g) for g in gens]
        elems = [e for e in elems if not e.is_zero()]
        if not elems:
            raise ValueError("zero ideal")
        zgens = []
        w = F.omega
        for e in elems:
            zgens.append(e)
            zgens.append(e * w)
        return cls._from_zgens(F, zgens)

    @classmethod
    def _from_zgens(cls, F: Field, zgens) -> FracIdeal:
        """Normalize a Z-generating set (assumed to span an o-module)."""
        coords = [F.to_omega_coords(e) for e in zgens]
        den = 1
        for s, t in coords:
            den = math.lcm(den, s.denominator, t.denominator)
        vecs = [(int(s * den), int(t * den)) for s, t in coords]
        a, b, c = _hnf2(vecs)
        g = math.gcd(math.gcd(a, b), math.gcd(c, den))
        return cls(F.D, den // g, a // g, b // g, c // g)

    def zbasis(self) -> tuple[FieldElem, FieldElem]:
        F = self.field
        return (
            F.from_omega_coords(Fraction(self.a, self.q), 0),
            F.from_omega_coords(Fraction(self.b, self.q), Fraction(self.c, self.q)),
        )

    def norm(self) -> Fraction:
        return Fraction(self.a * self.c, self.q * self.q)

    def __mul__(self, other):
        F = self.field
        if isinstance(other, FracIdeal):
            zg = [u * v for u in self.zbasis() for v in other.zbasis()]
            return FracIdeal._from_zgens(F, zg)
        e = other if isinstance(other, FieldElem) else F.elem(other)
        if e.is_zero():
            raise ValueError("zero ideal")
        return FracIdeal._from_zgens(F, [u * e for u in self.zbasis()])

    __rmul__ = __mul__

    def __add__(self, other: FracIdeal) -> FracIdeal:
        return FracIdeal._from_zgens(self.field, [*self.zbasis(), *other.zbasis()])

    def __pow__(self, k: int) -> FracIdeal:
        base = self if k >= 0 else self.inverse()
        result = self.field.unit_ideal
        for _ in range(abs(k)):
            result = result * base
        return result

    def conj(self) -> FracIdeal:
        return FracIdeal._from_zgens(self.field, [u.conj() for u in self.zbasis()])

    def inverse(self) -> FracIdeal:
        return self.conj() * self.field.elem(1 / self.norm())

    def __truediv__(self, other: FracIdeal) -> FracIdeal:
        return self * other.inverse()

    def contains(self, u: FieldElem) -> bool:
        F = self.field
        s, t = F.to_omega_coords(u)
        # solve u = m*(a/q) + k*(b + c w)/q
        k = t * self.q / self.c
        if k.denominator != 1:
            return False
        m = (s * self.q - k * self.b) / self.a
        return m.denominator == 1

    def __le__(self, other: FracIdeal) -> bool:
        return all(other.contains(u) for u in self.zbasis())

    def is_integral(self) -> bool:
        return self <= self.field.unit_ideal

    def is_principal_rational(self) -> bool:
        """True iff the ideal equals r*o for a rational r."""
        return self.c == 1 and self.b == 0 and self.a == 1

    def rational_generator(self) -> Fraction | None:
        """r with self = r*o, if such a rational exists."""
        if self.a == self.c and self.b == 0:
            return Fraction(self.a, self.q)
        return None

    def primitive_part(self) -> tuple[Fraction, int, int]:
        """(r, a', b') with self = r * (a'*Z + (b' + w)*Z)."""
        return Fraction(self.c, self.q), self.a // self.c, self.b // self.c

    def trace_ideal(self) -> Fraction:
        """Positive generator of Tr(self) as a Z-submodule of Q."""
        t1, t2 = (u.trace() for u in self.zbasis())
        return _frac_gcd(t1, t2)

    def key(self) -> tuple[int, int, int, int]:
        return (self.q, self.a, self.b, self.c)

    def __repr__(self):
        return f"FracIdeal(D={self.D}, q={self.q}, a={self.a}, b={self.b}, c={self.c})"


def _frac_gcd(*vals) -> Fraction:
    vals = [Fraction(v) for v in vals if v != 0]
    if not vals:
        return Fraction(0)
    den = 1
    for v in vals:
        den = math.lcm(den, v.denominator)
    g = 0
    for v in vals:
        g = math.gcd(g, int(v * den))
    return Fraction(g, den)


def kronecker(d: int, n: int) -> int:
    """Kronecker symbol (d | n) for n >= 1."""
    if n < 1:
        raise ValueError("n must be positive")
    result = 1
    for p, e in factorint(n).items():
        if p == 2:
            if d % 2 == 0:
                return 0
            v = 1 if d % 8 in (1, 7) else -1
        else:
            r = d % p
            if r == 0:
                return 0
            v = 1 if pow(r, (p - 1) // 2, p) == 1 else -1
        if e % 2:
            result *= v
    return result


def chi_K(F: Field, p: int) -> int:
    """The quadratic character of K at the prime p."""
    if p == 2:
        d = F.d_K
        if d % 4 == 0:
            return 0
        return 1 if d % 8 == 1 else -1
    return kronecker(F.d_K, p)


def splitting_type(F: Field, p: int) -> str:
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    return {0: "ramified", -1: "inert", 1: "split"}[chi_K(F, p)]


def _split_p(n: int, p: int) -> tuple[int, int]:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v, n


def hilbert_symbol(a, b, p: int) -> int:
    """The Hilbert symbol (a, b)_p for nonzero rationals a, b; p = -1 means the real place."""
    a, b = Fraction(a), Fraction(b)
    if a == 0 or b == 0:
        raise ValueError("Hilbert symbol of zero")
    if p == -1:
        return -1 if (a < 0 and b < 0) else 1
    # a and a*den^2 share a square class
    ai = a.numerator * a.denominator
    bi = b.numerator * b.denominator
    al, u = _split_p(ai, p)
    be, v = _split_p(bi, p)
    if p == 2:
        eps_u, eps_v = ((u - 1) // 2) % 2, ((v - 1) // 2) % 2
        om_u, om_v = ((u * u - 1) // 8) % 2, ((v * v - 1) // 8) % 2
        e = (eps_u * eps_v + al * om_v + be * om_u) % 2
        return -1 if e else 1
    s = 1
    if (al * be * ((p - 1) // 2)) % 2:
        s = -s
    if be % 2 and pow(u % p, (p - 1) // 2, p) != 1:
        s = -s
    if al % 2 and pow(v % p, (p - 1) // 2, p) != 1:
        s = -s
    return s


def norm_residue_symbol(F: Field, alpha, p: int) -> int:
    """(alpha, K/Q)_p, +1 iff alpha is a local norm from K_p."""
    return hilbert_symbol(alpha, F.D, p)
