from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from hermlat.classgroup import class_group
from hermlat.field import field_from_discriminant, fundamental_discriminants
from hermlat.genus import (
    GenusSym,
    exists_genus,
    genus_of_class,
    lambda_p,
    lambda_product,
    list_genera,
    occurring_steinitz_classes,
    partial_mass,
    sample_lattice,
    total_mass,
)
from hermlat.lattice import ConstructionError, construct_even, parity, steinitz

from . import oracle


def _genus(d, parity_, n, eps_map):
    F = field_from_discriminant(d)
    return GenusSym(F, parity_, n, tuple(eps_map[p] for p in F.ramified_primes))


@pytest.mark.parametrize("d", [-3, -4, -7, -8, -15, -20, -24, -39, -40, -47, -56, -84, -88, -95, -120])
def test_partial_mass_matches_oracle(d):
    for n in range(1, 7):
        oracle_set = sorted((par, tuple(sorted(e.items())), oracle.partial_mass(d, n, par, e))
                            for par, e in oracle.genera(d, n))
        F = field_from_discriminant(d)
        ours = sorted((G.parity, tuple(sorted(G.eps_map.items())), partial_mass(G)) for G in list_genera(F, n))
        assert ours == oracle_set


def test_published_masses():
    assert partial_mass(_genus(-47, "odd", 4, {47: 1})) == Fraction(221, 8)
    assert total_mass(_genus(-47, "odd", 4, {47: 1})) == Fraction(1105, 8)
    for eps in ({5: 1, 19: 1}, {5: -1, 19: -1}):
        G = _genus(-95, "odd", 3, eps)
        assert partial_mass(G) == Fraction(35, 2) and total_mass(G) == 70
    F = field_from_discriminant(-852)
    odd = sorted(partial_mass(G) for G in list_genera(F, 2) if G.parity == "odd")
    even = sorted(partial_mass(G) for G in list_genera(F, 2) if G.parity == "even")
    assert odd == [Fraction(35, 4), 9, Fraction(35, 2), 18]
    assert even == [6, Fraction(35, 3)]
    assert partial_mass(_genus(-39, "odd", 4, {3: 1, 13: 1})) == Fraction(935, 72)
    assert partial_mass(_genus(-39, "odd", 4, {3: -1, 13: -1})) == Fraction(154, 15)


def test_genus_counts():
    for d in fundamental_discriminants(300):
        F = field_from_discriminant(d)
        for n in range(1, 7):
            gs = list_genera(F, n)
            odd = [G for G in gs if G.parity == "odd"]
            even = [G for G in gs if G.parity == "even"]
            assert len(odd) == 2 ** (F.t - 1)
            if d % 2 or n % 2:
                assert not even
            elif F.D % 4 == 2:
                assert len(even) == 2 ** (F.t - 1)
            else:
                assert len(even) == (2 ** (F.t - 2) if F.t > 1 else (1 if n % 4 == 0 else 0))


def test_mass_ratio_law():
    for d in fundamental_discriminants(500):
        F = field_from_discriminant(d)
        CG = class_group(F)
        for n in range(1, 7):
            for G in list_genera(F, n):
                classes = occurring_steinitz_classes(G, CG)
                assert len(classes) == CG.h // 2 ** (F.t - 1)
                assert total_mass(G, CG) == len(classes) * partial_mass(G)


@given(st.sampled_from([d for d in fundamental_discriminants(300) if d % 2 == 0]), st.integers(1, 3), st.data())
def test_existence_matches_construction(d, m, data):
    F = field_from_discriminant(d)
    CG = class_group(F)
    c = data.draw(st.integers(0, CG.h - 1))
    ok = exists_genus(F, "even", 2 * m, CG.char_table[c])
    try:
        L = construct_even(F, 2 * m, c, CG)
    except ConstructionError:
        assert not ok
    else:
        assert ok and parity(L) == "even" and steinitz(L, CG) == c


def test_local_factors():
    G = _genus(-40, "even", 2, {2: 1, 5: 1})
    assert lambda_p(G, 5) == Fraction(6, 5)
    assert lambda_p(G, 2) == Fraction(1, 4) * (1 + Fraction(1, -2))
    assert lambda_product(_genus(-40, "odd", 3, {2: -1, 5: -1})) == 1
    with pytest.raises(ValueError):
        lambda_p(G, 3)


def test_genus_validation():
    F = field_from_discriminant(-20)
    with pytest.raises(ValueError):
        GenusSym(F, "odd", 2, (1, -1))
    with pytest.raises(ValueError):
        GenusSym(F, "weird", 2, (1, 1))
    with pytest.raises(ValueError):
        partial_mass(GenusSym(field_from_discriminant(-4), "even", 2, (1,)))
    with pytest.raises(ValueError):
        genus_of_class(field_from_discriminant(-3), "even", 2, 0)


def test_sample_lattice_lands_in_genus():
    F = field_from_discriminant(-852)
    CG = class_group(F)
    for G in list_genera(F, 2):
        for c in occurring_steinitz_classes(G, CG):
            L = sample_lattice(G, CG, c)
            assert parity(L) == G.parity and steinitz(L, CG) == c
    with pytest.raises(ValueError):
        sample_lattice(list_genera(F, 2)[0], CG, c=1)


def test_to_json():
    F = field_from_discriminant(-20)
    G = list_genera(F, 2)[-1]
    rec = G.to_json(class_group(F))
    assert rec["partial_mass"] == str(partial_mass(G)) and rec["classes"] == ["a"]
