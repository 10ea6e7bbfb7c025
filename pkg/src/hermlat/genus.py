"""Genera of definite unimodular lattices and their exact masses."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .bernoulli import gen_bernoulli
from .classgroup import ClassGroup, class_group, ideal_genus_cosets
from .field import Field
from .lattice import HermLattice, construct_even, construct_odd, even_obstruction

__all__ = [
    "GenusSym",
    "exists_genus",
    "list_genera",
    "lambda_p",
    "lambda_product",
    "partial_mass",
    "total_mass",
    "occurring_steinitz_classes",
    "sample_lattice",
    "genus_of_class",
]


@dataclass(frozen=True)
class GenusSym:
    """Parity, rank and ideal genus (as a character vector over the ramified primes)."""

    field: Field
    parity: str
    n: int
    eps: tuple[int, ...]

    def __post_init__(self):
        if self.parity not in ("odd", "even"):
            raise ValueError(f"parity must be 'odd' or 'even', got {self.parity!r}")
        if len(self.eps) != self.field.t or any(e not in (1, -1) for e in self.eps):
            raise ValueError("eps must have one entry +-1 per ramified prime")
        prod = 1
        for e in self.eps:
            prod *= e
        if prod != 1:
            raise ValueError("character vector must have product +1")

    @property
    def eps_map(self) -> dict[int, int]:
        return dict(zip(self.field.ramified_primes, self.eps))

    @property
    def is_principal_genus(self) -> bool:
        return all(e == 1 for e in self.eps)

    def name(self) -> str:
        sym = "I" if self.parity == "odd" else "II"
        coset = "o" if self.is_principal_genus else ",".join(
            f"{p}:{e:+d}" for p, e in self.eps_map.items()
        )
        return f"{sym}_{self.n}[{coset}]"

    def to_json(self, CG: ClassGroup | None = None) -> dict:
        out = {
            "d_K": self.field.d_K,
            "parity": self.parity,
            "n": self.n,
            "eps": {str(p): e for p, e in self.eps_map.items()},
            "partial_mass": str(partial_mass(self)),
        }
        if CG is not None:
            out["total_mass"] = str(total_mass(self, CG))
            out["classes"] = [CG.word(c) for c in occurring_steinitz_classes(self, CG)]
        return out


def _eps_vectors(t: int):
    for eps in itertools.product((1, -1), repeat=t):
        prod = 1
        for e in eps:
            prod *= e
        if prod == 1:
            yield eps


def exists_genus(F: Field, parity: str, n: int, eps) -> bool:
    if n < 1:
        return False
    if parity == "odd":
        return True
    chi2 = eps[0] if F.ramified_primes and F.ramified_primes[0] == 2 else None
    return even_obstruction(F, n, chi2) is None


def list_genera(F: Field, n: int) -> list[GenusSym]:
    """All genera of rank n: one odd genus per ideal genus plus the admissible even ones."""
    out = []
    for eps in _eps_vectors(F.t):
        for parity in ("odd", "even"):
            if exists_genus(F, parity, n, eps):
                out.append(GenusSym(F, parity, n, eps))
    return out


def lambda_p(G: GenusSym, p: int) -> Fraction:
    F, n = G.field, G.n
    if p not in F.ramified_primes:
        raise ValueError(f"{p} is not ramified in {F}")
    if n % 2:
        return Fraction(1)
    eps = G.eps_map[p]
    if p != 2:
        base = Fraction((-1) ** ((p - 1) // 2) * p)
        return 1 + eps * base ** (-(n // 2))
    if G.parity == "odd":
        return 1 - Fraction(1, 2**n)
    if F.d_K % 8 == 4:
        return Fraction(2, 2**n)
    base = Fraction((-1) ** ((F.D - 2) // 4) * 2)
    return Fraction(1, 2**n) * (1 + eps * base ** (-(n // 2)))


def lambda_product(G: GenusSym) -> Fraction:
    out = Fraction(1)
    for p in G.field.ramified_primes:
        out *= lambda_p(G, p)
    return out


def partial_mass(G: GenusSym) -> Fraction:
    F, n = G.field, G.n
    if not exists_genus(F, G.parity, n, G.eps):
        raise ValueError(f"no genus {G.name()} over {F}")
    m = Fraction(1, F.w)
    for j in range(2, n + 1):
        m *= abs(gen_bernoulli(F, j)) / (2 * j)
    m *= lambda_product(G)
    if n % 2 == 0:
        m *= abs(F.d_K) ** (n // 2)
    return m


def total_mass(G: GenusSym, CG: ClassGroup | None = None) -> Fraction:
    CG = CG or class_group(G.field)
    return Fraction(CG.h, 2 ** (G.field.t - 1)) * partial_mass(G)


def occurring_steinitz_classes(G: GenusSym, CG: ClassGroup | None = None) -> list[int]:
    CG = CG or class_group(G.field)
    return ideal_genus_cosets(CG).get(G.eps, [])


def genus_of_class(F: Field, parity: str, n: int, c: int, CG: ClassGroup | None = None) -> GenusSym:
    CG = CG or class_group(F)
    G = GenusSym(F, parity, n, CG.char_table[c])
    if not exists_genus(F, parity, n, G.eps):
        raise ValueError(f"no {parity} genus of rank {n} with Steinitz class {CG.word(c)}")
    return G


def sample_lattice(G: GenusSym, CG: ClassGroup | None = None, c: int | None = None) -> HermLattice:
    """A lattice in the genus, built on the first class of its ideal genus (or on class c)."""
    CG = CG or class_group(G.field)
    if c is None:
        c = occurring_steinitz_classes(G, CG)[0]
    elif CG.char_table[c] != G.eps:
        raise ValueError("class does not belong to the genus")
    if G.parity == "odd":
        return construct_odd(G.field, G.n, c, CG)
    return construct_even(G.field, G.n, c, CG)
