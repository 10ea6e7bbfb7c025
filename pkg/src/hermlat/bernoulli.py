"""Bernoulli polynomials and generalized Bernoulli numbers for the field character."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb

from .field import Field, kronecker

__all__ = [
    "bernoulli_number",
    "bernoulli_poly",
    "bernoulli_number_at_one",
    "eval_poly",
    "gen_bernoulli",
    "l_value_neg",
]


@lru_cache(maxsize=None)
def bernoulli_number(j: int) -> Fraction:
    """B_j with the convention B_1 = -1/2."""
    if j == 0:
        return Fraction(1)
    # sum_{k<j+1} C(j+1, k) B_k = 0
    s = sum(comb(j + 1, k) * bernoulli_number(k) for k in range(j))
    return -s / (j + 1)


@lru_cache(maxsize=None)
def bernoulli_poly(j: int) -> tuple[Fraction, ...]:
    """Coefficients of B_j(X), constant term first."""
    if j < 0:
        raise ValueError("j must be nonnegative")
    return tuple(comb(j, k) * bernoulli_number(j - k) for k in range(j + 1))


def eval_poly(coeffs, x) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def bernoulli_number_at_one(j: int) -> Fraction:
    if j < 1:
        raise ValueError("j must be positive")
    return eval_poly(bernoulli_poly(j), 1)


@lru_cache(maxsize=None)
def _odd_sum(d_K: int, j: int) -> Fraction:
    f = abs(d_K)
    coeffs = bernoulli_poly(j)
    # f^(j-1) * sum chi(a) B_j(a/f), with B_j(a/f) = sum_k c_k a^k / f^k;
    # scale everything to the common denominator f^j
    total = 0
    ints = [c * f ** (j - k) for k, c in enumerate(coeffs)]
    for a in range(1, f + 1):
        chi = kronecker(d_K, a)
        if chi == 0:
            continue
        val = Fraction(0)
        ak = 1
        for c in ints:
            val += c * ak
            ak *= a
        total += chi * val
    return Fraction(total) * Fraction(f ** (j - 1), f**j)


def gen_bernoulli(F: Field, j: int) -> Fraction:
    """B_{j, chi^j}: trivial character for even j, the field character for odd j."""
    if j < 1:
        raise ValueError("j must be positive")
    if j % 2 == 0:
        return bernoulli_number_at_one(j)
    return _odd_sum(F.d_K, j)


def l_value_neg(F: Field, j: int) -> Fraction:
    """|L(1 - j, chi^j)| = |B_{j, chi^j}| / j."""
    return abs(gen_bernoulli(F, j)) / j
