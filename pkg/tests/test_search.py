from fractions import Fraction

import mpmath
import pytest

from hermlat.field import field_from_discriminant, fundamental_discriminants
from hermlat.genus import GenusSym, list_genera, partial_mass
from hermlat.search import (
    SearchReport,
    candidates,
    certify,
    crude_d_max,
    d_max,
    full_search,
    is_candidate_mass,
    mass_lower_bound,
    refined_d_max,
    zeta_bounds,
)


def test_zeta_bounds_enclose_zeta():
    for j in range(2, 10):
        lo, hi = zeta_bounds(j)
        z = mpmath.zeta(j)
        assert mpmath.mpf(lo.numerator) / lo.denominator < z < mpmath.mpf(hi.numerator) / hi.denominator
        assert hi - lo < Fraction(1, 10**3)
    with pytest.raises(ValueError):
        zeta_bounds(1)


def test_lower_bound_is_monotone():
    assert mass_lower_bound(4, 100) < mass_lower_bound(4, 200)
    for n in range(2, 8):
        vals = [mass_lower_bound(n, d) * {3: 6, 4: 4}.get(d, 2) for d in range(5, 200)]
        assert all(a < b for a, b in zip(vals, vals[1:]))
    with pytest.raises(ValueError):
        mass_lower_bound(1, 10)
    with pytest.raises(ValueError):
        mass_lower_bound(2, 2)


def test_lower_bound_is_sound():
    for d in fundamental_discriminants(312):
        F = field_from_discriminant(d)
        for n in range(2, 8):
            f = mass_lower_bound(n, abs(d))
            for G in list_genera(F, n):
                assert f <= partial_mass(G)


def test_lower_bound_values():
    # these fall well short of 1/2: the bound compares against 1/w, not 1/2
    assert mass_lower_bound(2, 313) == pytest.approx(0.17548, rel=1e-4)
    assert mass_lower_bound(7, 4) < mass_lower_bound(7, 5) < 1e-4


def test_crude_bounds():
    assert {n: crude_d_max(n) for n in range(2, 8)} == {2: 1060, 3: 26, 4: 72, 5: 16, 6: 28, 7: 10}


def test_refined_bounds():
    assert d_max(2) == 312
    assert d_max(4) == 8
    assert d_max(6) == 4
    assert refined_d_max(5) == 7 and refined_d_max(7) == 3
    # -23 carries a rank-3 genus of partial mass 1/2, so the refined bound is 23
    assert refined_d_max(3) == 23
    assert partial_mass(GenusSym(field_from_discriminant(-23), "odd", 3, (1,))) == Fraction(1, 2)
    with pytest.raises(ValueError):
        d_max(1)


def test_candidates():
    odd2 = {G.field.d_K for G in candidates(2, "odd")}
    assert {-3, -4, -7, -8, -20} <= odd2
    even2 = {G.field.d_K for G in candidates(2, "even")}
    assert {-8, -24, -40, -88} <= even2 and -4 not in even2
    assert {abs(G.field.d_K) for G in candidates(6)} <= {3, 4}
    assert all(is_candidate_mass(partial_mass(G)) for G in candidates(3))
    assert not is_candidate_mass(Fraction(1, 3)) and not is_candidate_mass(Fraction(3, 8))


def test_certify():
    F3 = field_from_discriminant(-3)
    assert certify(GenusSym(F3, "odd", 2, (1,))) == (True, 72)
    F20 = field_from_discriminant(-20)
    assert certify(GenusSym(F20, "odd", 2, (-1, -1)))[0]
    assert not certify(GenusSym(F20, "even", 2, (-1, -1)))[0]
    F88 = field_from_discriminant(-88)
    assert certify(GenusSym(F88, "even", 2, (-1, -1)))[0]
    assert not is_candidate_mass(partial_mass(GenusSym(F88, "even", 2, (1, 1))))
    for G in candidates(6):
        assert not certify(G)[0]


@pytest.fixture(scope="module")
def report():
    return full_search()


def test_report_invariants(report):
    for r in report.rows:
        assert not r.certified or r.candidate
        if r.aut_order is not None:
            assert r.certified == (r.partial_mass * r.aut_order == 1)
    # a failed odd rank n means rank n + 1 is never reported for that line
    failed = {(r.d_K, r.eps, r.n) for r in report.rows if r.parity == "odd" and not r.certified}
    for r in report.rows:
        if r.parity == "odd":
            assert (r.d_K, r.eps, r.n - 1) not in failed
    by = report.by_discriminant()
    assert by[-3] == ["I_2[o]", "I_3[o]", "I_4[o]", "I_5[o]"]
    assert sorted(by[-4]) == ["II_4[o]", "I_2[o]", "I_3[o]", "I_4[o]"]
    assert list(by) == [-3, -4, -7, -8, -20, -24, -40, -88]
    assert len(report.certified()) == 17
    assert report.d_max[2] == (1060, 312)


def test_report_json_round_trip(report):
    again = SearchReport.from_json(report.to_json())
    assert again.rows == report.rows and again.d_max == report.d_max


def test_parallel_search_matches(report):
    assert full_search(jobs=2).rows == report.rows
