"""Hermitian lattices given by a pseudo-basis over an imaginary-quadratic field."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .classgroup import ClassGroup, class_group, class_of_ideal, ideal_of_form, ideal_of_norm_in_class
from .field import Field, FieldElem, FracIdeal, make_field, norm_residue_symbol

__all__ = [
    "HermLattice",
    "ZGram",
    "ConstructionError",
    "scale_ideal",
    "norm_ideal",
    "volume_ideal",
    "is_unimodular",
    "parity",
    "steinitz",
    "is_definite",
    "conjugate_lattice",
    "twist_lattice",
    "direct_sum",
    "construct_odd",
    "construct_even",
    "zbasis_and_trace_gram",
    "hermitian_det",
]


class ConstructionError(ValueError):
    """An even lattice was requested that the existence conditions rule out."""

    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code


@dataclass(frozen=True)
class HermLattice:
    field: Field
    coeff_ideals: tuple[FracIdeal, ...]
    gram: tuple[tuple[FieldElem, ...], ...]

    def __post_init__(self):
        n = len(self.coeff_ideals)
        if len(self.gram) != n or any(len(row) != n for row in self.gram):
            raise ValueError("gram matrix does not match the number of coefficient ideals")
        for i in range(n):
            for j in range(n):
                if self.gram[i][j] != self.gram[j][i].conj():
                    raise ValueError("gram matrix is not hermitian")

    @property
    def n(self) -> int:
        return len(self.coeff_ideals)

    @classmethod
    def build(cls, F: Field, ideals, gram) -> HermLattice:
        def elem(v):
            if isinstance(v, FieldElem):
                return v
            if isinstance(v, tuple):
                return F.elem(*v)
            return F.elem(v)

        return cls(F, tuple(ideals), tuple(tuple(elem(v) for v in row) for row in gram))

    def to_json(self) -> dict:
        return {
            "d_K": self.field.d_K,
            "n": self.n,
            "ideals": [[I.q, I.a, I.b, I.c] for I in self.coeff_ideals],
            "gram": [[[str(e.x), str(e.y)] for e in row] for row in self.gram],
        }

    @classmethod
    def from_json(cls, data: dict) -> HermLattice:
        d_K = data["d_K"]
        F = make_field(d_K if d_K % 4 == 1 else d_K // 4)
        ideals = [FracIdeal(F.D, *map(int, t)) for t in data["ideals"]]
        gram = [[F.elem(Fraction(x), Fraction(y)) for x, y in row] for row in data["gram"]]
        return cls.build(F, ideals, gram)


def hermitian_det(F: Field, gram) -> Fraction:
    """Determinant of a hermitian matrix over K (a rational number)."""
    m = [list(row) for row in gram]
    n = len(m)
    det = F.one
    for k in range(n):
        piv = next((r for r in range(k, n) if not m[r][k].is_zero()), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            det = -det
        det = det * m[k][k]
        inv = m[k][k].inverse()
        for r in range(k + 1, n):
            if m[r][k].is_zero():
                continue
            f = m[r][k] * inv
            for c in range(k, n):
                m[r][c] = m[r][c] - f * m[k][c]
    if not det.is_rational():
        raise ArithmeticError("determinant of a hermitian matrix must be rational")
    return det.x


def scale_ideal(L: HermLattice) -> FracIdeal:
    result = None
    for i in range(L.n):
        for j in range(L.n):
            g = L.gram[i][j]
            if g.is_zero():
                continue
            term = L.coeff_ideals[i] * L.coeff_ideals[j].conj() * g
            result = term if result is None else result + term
    if result is None:
        raise ValueError("zero form")
    return result


def _zgenerators(L: HermLattice):
    """Z-basis of L as (block index, element of the coefficient ideal)."""
    return [(i, u) for i, I in enumerate(L.coeff_ideals) for u in _reduced_zbasis(I)]


def norm_ideal(L: HermLattice) -> FracIdeal:
    F = L.field
    s = scale_ideal(L)
    gens = [u.norm() * L.gram[i][i].x for i, u in _zgenerators(L)]
    gens.append(s.trace_ideal())
    return F.ideal(*[g for g in gens if g != 0])


def volume_ideal(L: HermLattice) -> FracIdeal:
    v = hermitian_det(L.field, L.gram)
    for I in L.coeff_ideals:
        v *= I.norm()
    if v == 0:
        raise ValueError("degenerate lattice")
    return L.field.ideal(v)


def is_unimodular(L: HermLattice) -> bool:
    o = L.field.unit_ideal
    return scale_ideal(L) == o and volume_ideal(L) == o


def parity(L: HermLattice) -> str:
    if not is_unimodular(L):
        raise ValueError("parity is only defined here for unimodular lattices")
    nL = norm_ideal(L)
    if nL == L.field.unit_ideal:
        return "odd"
    if nL == L.field.ideal(2):
        return "even"
    raise AssertionError(f"unexpected norm ideal {nL} of a unimodular lattice")


def steinitz_ideal(L: HermLattice) -> FracIdeal:
    result = L.field.unit_ideal
    for I in L.coeff_ideals:
        result = result * I
    return result


def steinitz(L: HermLattice, CG: ClassGroup | None = None) -> int:
    CG = CG or class_group(L.field)
    return class_of_ideal(CG, steinitz_ideal(L))


def is_definite(L: HermLattice) -> bool:
    for k in range(1, L.n + 1):
        minor = hermitian_det(L.field, [row[:k] for row in L.gram[:k]])
        if minor <= 0:
            return False
    return True


def conjugate_lattice(L: HermLattice) -> HermLattice:
    return HermLattice(
        L.field,
        tuple(I.conj() for I in L.coeff_ideals),
        tuple(tuple(e.conj() for e in row) for row in L.gram),
    )


def twist_lattice(L: HermLattice, c: FracIdeal) -> HermLattice:
    """The lattice cL on the space rescaled by 1/N(c)."""
    s = 1 / c.norm()
    return HermLattice(
        L.field,
        tuple(I * c for I in L.coeff_ideals),
        tuple(tuple(e * s for e in row) for row in L.gram),
    )


def direct_sum(L1: HermLattice, L2: HermLattice) -> HermLattice:
    if L1.field != L2.field:
        raise ValueError("direct sum of lattices over different fields")
    zero = L1.field.elem(0)
    gram = [tuple(row) + (zero,) * L2.n for row in L1.gram]
    gram += [(zero,) * L1.n + tuple(row) for row in L2.gram]
    return HermLattice(L1.field, L1.coeff_ideals + L2.coeff_ideals, tuple(gram))


def _sum_all(F: Field, blocks) -> HermLattice:
    L = HermLattice(F, (), ())
    for B in blocks:
        L = direct_sum(L, B)
    return L


def rank_one(F: Field, I: FracIdeal) -> HermLattice:
    """The odd unimodular line I*x with h(x, x) = 1/N(I)."""
    return HermLattice(F, (I,), ((F.elem(1 / I.norm()),),))


def construct_odd(F: Field, n: int, c: int = 0, CG: ClassGroup | None = None) -> HermLattice:
    if n < 1:
        raise ValueError("rank must be positive")
    CG = CG or class_group(F)
    I = F.unit_ideal if c == 0 else ideal_of_form(F, CG.forms[c])
    return _sum_all(F, [rank_one(F, F.unit_ideal)] * (n - 1) + [rank_one(F, I)])


def even_binary(F: Field, CG: ClassGroup, c: int) -> HermLattice:
    """Binary even unimodular lattice o*x1 + a*x2 with Steinitz class c (a of odd norm)."""
    I = ideal_of_norm_in_class(CG, c)
    N = int(I.norm())
    if N % 4 == 3:
        alpha = F.elem(1)
        lam = Fraction(1 + N, 4)
    else:
        if F.D % 4 != 2:
            raise ConstructionError(
                "SYMBOL_OBSTRUCTION", f"no binary even lattice for class {CG.word(c)} over {F}"
            )
        alpha = F.elem(1, 1)
        lam = Fraction(1 + alpha.norm() * N, 4)
    gram = ((F.elem(2), alpha), (alpha.conj(), F.elem(2 * lam / N)))
    return HermLattice(F, (F.unit_ideal, I), gram)


def free_even_quaternary_gaussian(F: Field) -> HermLattice:
    """The free even unimodular rank-4 lattice over Q(i)."""
    if F.D != -1:
        raise ValueError("only defined over Q(i)")
    one, i = F.elem(1), F.elem(1, 1)
    gram = [
        [2, 1, 0, 0],
        [1, 2, i, i],
        [0, i.conj(), 2, 1],
        [0, i.conj(), 1, 2],
    ]
    return HermLattice.build(F, [F.unit_ideal] * 4, [[one * v for v in row] for row in gram])


def even_obstruction(F: Field, n: int, chi2: int | None) -> str | None:
    """The violated existence condition for an even lattice, or None."""
    if F.d_K % 2:
        return "EVEN_NEEDS_EVEN_DISC"
    if n % 2:
        return "EVEN_NEEDS_EVEN_RANK"
    if F.D % 4 == 3 and chi2 != (-1) ** (n // 2):
        return "SYMBOL_OBSTRUCTION"
    return None


def construct_even(F: Field, n: int, c: int = 0, CG: ClassGroup | None = None) -> HermLattice:
    CG = CG or class_group(F)
    chi2 = None
    if F.d_K % 2 == 0:
        I = ideal_of_norm_in_class(CG, c)
        chi2 = norm_residue_symbol(F, I.norm(), 2)
    code = even_obstruction(F, n, chi2)
    if code == "EVEN_NEEDS_EVEN_DISC":
        raise ConstructionError(code, f"d_K = {F.d_K} is odd")
    if code == "EVEN_NEEDS_EVEN_RANK":
        raise ConstructionError(code, f"rank {n} is odd")
    if code == "SYMBOL_OBSTRUCTION":
        raise ConstructionError(
            code, f"(N(a), K/Q)_2 = {chi2} but rank {n} needs {(-1) ** (n // 2)}"
        )
    if n < 2:
        raise ValueError("rank must be positive")
    m = n // 2
    if F.D % 4 == 2:
        blocks = [even_binary(F, CG, 0)] * (m - 1) + [even_binary(F, CG, c)]
        return _sum_all(F, blocks)
    if chi2 == -1:
        pair = [even_binary(F, CG, c), even_binary(F, CG, CG.inv(c))]
        return _sum_all(F, pair * (m // 2) + [even_binary(F, CG, c)])
    if F.D == -1:
        return _sum_all(F, [free_even_quaternary_gaussian(F)] * (m // 2))
    b = next(k for k in range(CG.h) if CG.char_table[k][0] == -1)
    pair = [even_binary(F, CG, b), even_binary(F, CG, CG.inv(b))]
    tail = [even_binary(F, CG, b), even_binary(F, CG, CG.mul(CG.inv(b), c))]
    return _sum_all(F, pair * (m // 2 - 1) + tail)


@dataclass(frozen=True)
class ZGram:
    """Trace form of a hermitian lattice on a Z-basis, with the action of omega.

    The Z-basis is (alpha_1 x_1, beta_1 x_1, ..., alpha_n x_n, beta_n x_n).
    ``ratios[i] = (p, q, r)`` records beta_i = ((p + q*omega)/r) * alpha_i.
    """

    gram: np.ndarray
    omega_action: np.ndarray
    ratios: np.ndarray
    omega_trace: int
    omega_norm: int

    @property
    def dim(self) -> int:
        return self.gram.shape[0]


def _reduced_zbasis(I: FracIdeal) -> tuple[FieldElem, FieldElem]:
    """Lagrange-reduced Z-basis of I for the norm form."""
    u, v = I.zbasis()
    if v.norm() < u.norm():
        u, v = v, u
    while True:
        # inner product attached to the norm form
        mu = (u * v.conj()).trace() / (2 * u.norm())
        k = round(mu)
        if k:
            v = v - u * k
        if v.norm() < u.norm():
            u, v = v, u
        else:
            return u, v


def _omega_solve(F: Field, target: FieldElem, u: FieldElem, v: FieldElem):
    """Rational (x, y) with target = x*u + y*v."""
    (a1, a2), (b1, b2), (t1, t2) = (F.to_omega_coords(e) for e in (u, v, target))
    det = a1 * b2 - a2 * b1
    return (t1 * b2 - t2 * b1) / det, (a1 * t2 - a2 * t1) / det


def zbasis_and_trace_gram(L: HermLattice) -> ZGram:
    F = L.field
    basis = []
    ratios = []
    for i, I in enumerate(L.coeff_ideals):
        u, v = _reduced_zbasis(I)
        basis += [(i, u), (i, v)]
        s, t = F.to_omega_coords(v / u)
        r = np.lcm(s.denominator, t.denominator)
        ratios.append((int(s * r), int(t * r), int(r)))
    dim = len(basis)
    gram = np.zeros((dim, dim), dtype=np.int64)
    for a, (i, u) in enumerate(basis):
        for b, (j, v) in enumerate(basis):
            val = (u * L.gram[i][j] * v.conj()).trace()
            if val.denominator != 1:
                raise ValueError("lattice is not integral: trace form has a non-integer entry")
            gram[a, b] = int(val)
    J = np.zeros((dim, dim), dtype=np.int64)
    w = F.omega
    for k in range(L.n):
        u, v = basis[2 * k][1], basis[2 * k + 1][1]
        for col in (2 * k, 2 * k + 1):
            x, y = _omega_solve(F, w * basis[col][1], u, v)
            if x.denominator != 1 or y.denominator != 1:
                raise AssertionError("omega does not preserve the coefficient ideal")
            J[2 * k, col] = int(x)
            J[2 * k + 1, col] = int(y)
    return ZGram(gram, J, np.array(ratios, dtype=np.int64).reshape(-1, 3), F.omega_trace, F.omega_norm)
