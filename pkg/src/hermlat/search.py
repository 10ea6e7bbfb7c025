"""Discriminant bounds, candidate genera and certification of single-class partial genera."""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache

from mpmath import iv

from .autgroup import unitary_aut_order
from .classgroup import class_group, ideal_genus_cosets
from .field import Field, field_from_discriminant, fundamental_discriminants
from .genus import GenusSym, exists_genus, list_genera, partial_mass, sample_lattice

__all__ = [
    "zeta_bounds",
    "mass_lower_bound",
    "crude_d_max",
    "refined_d_max",
    "d_max",
    "is_candidate_mass",
    "candidates",
    "certify",
    "SearchRow",
    "SearchReport",
    "full_search",
]

_ZETA_TERMS = 200
_ZETA_DIGITS = 10**9


@lru_cache(maxsize=None)
def zeta_bounds(j: int) -> tuple[Fraction, Fraction]:
    """Rational lo <= zeta(j) <= hi, each rounded outward to 1e-9."""
    if j < 2:
        raise ValueError("zeta(j) needs j >= 2")
    N = _ZETA_TERMS
    s = sum(Fraction(1, k**j) for k in range(1, N + 1))
    # integral_{N+1}^inf x^-j dx <= sum_{k>N} k^-j <= integral_N^inf x^-j dx
    tail_lo = Fraction(1, (j - 1) * (N + 1) ** (j - 1))
    tail_hi = Fraction(1, (j - 1) * N ** (j - 1))
    lo = Fraction(math.floor((s + tail_lo) * _ZETA_DIGITS), _ZETA_DIGITS)
    hi = Fraction(math.ceil((s + tail_hi) * _ZETA_DIGITS), _ZETA_DIGITS)
    return lo, hi


def _iv_frac(x: Fraction):
    return iv.mpf(x.numerator) / x.denominator


def _w_of(d: int) -> int:
    return {3: 6, 4: 4}.get(d, 2)


def _bound_interval(n: int, d: int, t_bound):
    """Interval enclosure of the analytic lower bound; w is taken as 1."""
    val = iv.mpf(d) ** (iv.mpf(n * n + n - 2) / 4)
    for j in range(2, n + 1):
        fact = 1
        for k in range(2, j):
            fact *= k
        val *= iv.mpf(fact) / (2 * iv.pi) ** j
        lo, hi = zeta_bounds(j)
        # even j: zeta(j) appears in the numerator; odd j: 1/zeta(j) bounds L(j, chi) from below
        val = val * _iv_frac(lo) if j % 2 == 0 else val / _iv_frac(hi)
    if n % 2 == 0:
        t = iv.log(d) / iv.log(2) if t_bound is None else iv.mpf(t_bound)
        val *= iv.mpf(2 ** (n // 2) - 1) / (2**n * (t + 1) ** (iv.mpf(n) / 2))
    return val


def mass_lower_bound(n: int, d: int, t_bound=None) -> float:
    """Certified lower bound for the partial mass of any rank-n genus with |d_K| = d.

    For even n the number of ramified primes is bounded by ``t_bound``,
    log2(d) by default. The returned float is the lower end of an interval
    enclosure, so it never exceeds the exact bound.
    """
    if n < 2:
        raise ValueError("the bound needs n >= 2")
    if d < 3:
        raise ValueError("the bound needs d >= 3")
    return float(_bound_interval(n, d, t_bound).a) / _w_of(d)


def _exceeds_unit_bound(n: int, d: int) -> bool:
    """True when w * f_n(d) > 1 is certain, so no single-class genus fits."""
    return _bound_interval(n, d, None).a > 1


@lru_cache(maxsize=None)
def crude_d_max(n: int) -> int:
    """Largest d not yet excluded by the analytic bound (the bound grows with d)."""
    if n < 2:
        raise ValueError("d_max needs n >= 2")
    d = 3
    while not _exceeds_unit_bound(n, d + 1):
        d += 1
    return d


def is_candidate_mass(m: Fraction) -> bool:
    return m.numerator == 1 and m.denominator % 2 == 0


@lru_cache(maxsize=None)
def _candidates_upto(n: int, limit: int) -> tuple[tuple[int, str, tuple[int, ...]], ...]:
    out = []
    for d in fundamental_discriminants(limit):
        F = field_from_discriminant(d)
        for G in list_genera(F, n):
            if is_candidate_mass(partial_mass(G)):
                out.append((d, G.parity, G.eps))
    return tuple(out)


@lru_cache(maxsize=None)
def refined_d_max(n: int) -> int:
    """Largest |d_K| <= crude bound carrying a rank-n genus of partial mass 1/(2m); 0 if none."""
    found = _candidates_upto(n, crude_d_max(n))
    return max((abs(d) for d, _, _ in found), default=0)


def d_max(n: int) -> int:
    return refined_d_max(n)


def candidates(n: int, parity: str | None = None) -> list[GenusSym]:
    """Genera of rank n with |d_K| <= d_max(n) and partial mass 1/(2m)."""
    out = []
    for d, par, eps in _candidates_upto(n, crude_d_max(n)):
        if parity is None or par == parity:
            out.append(GenusSym(field_from_discriminant(d), par, n, eps))
    return out


def certify(G: GenusSym) -> tuple[bool, int]:
    """(single-class?, |U(L)|) for a sample lattice L of the genus."""
    order = unitary_aut_order(sample_lattice(G))
    return partial_mass(G) * order == 1, order


@dataclass(frozen=True)
class SearchRow:
    d_K: int
    parity: str
    n: int
    eps: tuple[int, ...]
    coset: str
    partial_mass: Fraction
    candidate: bool
    certified: bool
    aut_order: int | None

    @property
    def label(self) -> str:
        return f"{'I' if self.parity == 'odd' else 'II'}_{self.n}[{self.coset}]"

    def to_json(self) -> dict:
        return {
            "d_K": self.d_K,
            "parity": self.parity,
            "n": self.n,
            "eps": list(self.eps),
            "coset": self.coset,
            "partial_mass": str(self.partial_mass),
            "candidate": self.candidate,
            "certified": self.certified,
            "aut_order": self.aut_order,
        }

    @classmethod
    def from_json(cls, data: dict) -> SearchRow:
        return cls(
            data["d_K"], data["parity"], data["n"], tuple(data["eps"]), data["coset"],
            Fraction(data["partial_mass"]), data["candidate"], data["certified"], data["aut_order"],
        )


@dataclass
class SearchReport:
    rows: list[SearchRow]
    d_max: dict[int, tuple[int, int]] = dc_field(default_factory=dict)

    def certified(self) -> list[SearchRow]:
        return [r for r in self.rows if r.certified]

    def by_discriminant(self) -> dict[int, list[str]]:
        out: dict[int, list[str]] = {}
        for r in self.certified():
            out.setdefault(r.d_K, []).append(r.label)
        return out

    def to_json(self) -> dict:
        return {
            "d_max": {str(n): {"crude": c, "refined": r} for n, (c, r) in self.d_max.items()},
            "rows": [r.to_json() for r in self.rows],
        }

    @classmethod
    def from_json(cls, data: dict) -> SearchReport:
        dm = {int(n): (v["crude"], v["refined"]) for n, v in data["d_max"].items()}
        return cls([SearchRow.from_json(r) for r in data["rows"]], dm)


def _coset_label(F: Field, eps) -> str:
    if all(e == 1 for e in eps):
        return "o"
    CG = class_group(F)
    return CG.word(ideal_genus_cosets(CG)[tuple(eps)][0])


def _row(G: GenusSym, check: bool) -> tuple[SearchRow, bool]:
    m = partial_mass(G)
    cand = is_candidate_mass(m)
    ok, order = (False, None)
    if cand and check:
        ok, order = certify(G)
    row = SearchRow(G.field.d_K, G.parity, G.n, G.eps, _coset_label(G.field, G.eps), m, cand, ok, order)
    return row, ok


def _ascend(G: GenusSym, step: int, rows: list[SearchRow]):
    """Certify G, then keep adding rank ``step`` while certification holds."""
    F, n = G.field, G.n
    while True:
        row, ok = _row(GenusSym(F, G.parity, n, G.eps), True)
        rows.append(row)
        if not ok:
            return
        n += step
        if not exists_genus(F, G.parity, n, G.eps):
            return


def _search_line(d: int, seeds: tuple[tuple[str, int, tuple[int, ...]], ...]) -> list[SearchRow]:
    F = field_from_discriminant(d)
    rows: list[SearchRow] = []
    done = set()
    for parity, n, eps in seeds:
        if (parity, n, eps) in done:
            continue
        step = 1 if parity == "odd" else 4
        before = len(rows)
        _ascend(GenusSym(F, parity, n, eps), step, rows)
        done.update((r.parity, r.n, r.eps) for r in rows[before:])
    return rows


def full_search(jobs: int = 1) -> SearchReport:
    """Run the whole classification: odd seeds at rank 2, even seeds at ranks 2 and 4.

    Each discriminant is an independent line of work; with ``jobs > 1`` the
    lines run in worker processes and are merged in a fixed order.
    """
    seeds: dict[int, list[tuple[str, int, tuple[int, ...]]]] = {}
    for G in candidates(2):
        seeds.setdefault(G.field.d_K, []).append((G.parity, 2, G.eps))
    for G in candidates(4, "even"):
        seeds.setdefault(G.field.d_K, []).append(("even", 4, G.eps))
    work = [(d, tuple(sorted(s, key=lambda x: (x[0] != "odd", x[1], x[2]))))
            for d, s in sorted(seeds.items(), key=lambda kv: -kv[0])]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            lines = list(ex.map(_search_line, *zip(*work)))
    else:
        lines = [_search_line(d, s) for d, s in work]
    rows = [r for line in lines for r in line]
    rows.sort(key=lambda r: (abs(r.d_K), r.parity != "odd", r.n, [-e for e in r.eps]))
    dm = {n: (crude_d_max(n), refined_d_max(n)) for n in (2, 4)}
    return SearchReport(rows, dm)


def default_jobs() -> int:
    return max(1, min(4, os.cpu_count() or 1))
