from fractions import Fraction

import pytest

from hermlat.bernoulli import bernoulli_number, bernoulli_number_at_one, bernoulli_poly, eval_poly, gen_bernoulli
from hermlat.field import field_from_discriminant, fundamental_discriminants

from . import oracle


def test_bernoulli_numbers():
    assert [bernoulli_number(j) for j in range(7)] == [1, Fraction(-1, 2), Fraction(1, 6), 0, Fraction(-1, 30), 0,
                                                       Fraction(1, 42)]
    assert bernoulli_number(12) == Fraction(-691, 2730)
    assert bernoulli_number_at_one(1) == Fraction(1, 2)


def test_bernoulli_polynomials():
    # B_2(X) = X^2 - X + 1/6; B_j(1 - x) = (-1)^j B_j(x)
    assert bernoulli_poly(2) == (Fraction(1, 6), -1, 1)
    for j in range(1, 9):
        for x in (Fraction(1, 3), Fraction(2, 7)):
            assert eval_poly(bernoulli_poly(j), 1 - x) == (-1) ** j * eval_poly(bernoulli_poly(j), x)


@pytest.mark.parametrize("d", [-3, -4, -7, -8, -15, -20, -23, -39, -47, -84, -95])
def test_generalized_bernoulli_matches_oracle(d):
    F = field_from_discriminant(d)
    for j in range(1, 8):
        if j == 1:
            continue
        assert gen_bernoulli(F, j) == oracle.gen_bernoulli(d, j)


def test_frozen_values():
    # B_{3,chi} for d = -3, -4 and B_{1,chi} = -h/(w/2)
    assert gen_bernoulli(field_from_discriminant(-3), 3) == Fraction(2, 3)
    assert gen_bernoulli(field_from_discriminant(-4), 3) == Fraction(3, 2)
    assert gen_bernoulli(field_from_discriminant(-23), 1) == -3


def test_odd_character_values_vanish_for_even_parity_mismatch():
    # the field character is odd, so B_{j,chi} with j odd is nonzero and the sign alternates
    for d in fundamental_discriminants(100):
        F = field_from_discriminant(d)
        for j in (1, 3, 5):
            b = gen_bernoulli(F, j)
            assert b != 0
            assert (b < 0) == (j % 4 == 1)
