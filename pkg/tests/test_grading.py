from fractions import Fraction

import pytest

from bigraded.errors import DomainError, InputError
from bigraded.grading import (
    Bidegree,
    VanishingLine,
    auto_g_bound,
    bidegrees_between,
    parse_range,
    range_statement,
    slope,
)


def test_slope_examples():
    assert slope((4, 3)) == Fraction(3, 4)
    assert slope((5, 0)) == 0
    assert slope((6, 4)) == Fraction(2, 3)


def test_slope_genus_zero_is_domain_error():
    with pytest.raises(DomainError):
        slope((0, 3))


def test_slope_times_genus_is_degree_exactly():
    for g in range(1, 40):
        for d in range(0, 40):
            assert slope((g, d)) * g == d


def test_bidegree_invariants():
    with pytest.raises(DomainError):
        Bidegree(-1, 0)
    with pytest.raises(DomainError):
        Bidegree(0, -2)


def test_bidegrees_between_quarter_line():
    pts = bidegrees_between(Fraction(3, 4), 20)
    assert [(p.g, p.d) for p in pts] == [(1, 0), (2, 1), (3, 2), (4, 3)]


def test_bidegrees_between_zero_slope_edge():
    # (1,0) has slope 0 <= 0; this edge case is part of the contract
    pts = bidegrees_between(Fraction(0), 5)
    assert [(p.g, p.d) for p in pts] == [(1, 0)]


def _brute_force_scan(high, g_max, d_max):
    out = []
    for g in range(1, g_max + 1):
        for d in range(0, d_max + 1):
            if d >= g - 1 and Fraction(d, g) <= high:
                out.append((g, d))
    return sorted(out)


def test_bidegrees_between_four_fifths_matches_brute_force():
    # expected values computed by the independent double-loop oracle
    expected = _brute_force_scan(Fraction(4, 5), 6, 6)
    assert expected == [(1, 0), (2, 1), (3, 2), (4, 3), (5, 4)]
    pts = bidegrees_between(Fraction(4, 5), 6)
    assert [(p.g, p.d) for p in pts] == expected


def test_bidegrees_between_closure_property():
    for num, den in ((3, 4), (4, 5), (1, 2), (7, 8)):
        high = Fraction(num, den)
        pts = {(p.g, p.d) for p in bidegrees_between(high, 12)}
        for g in range(1, 13):
            for d in range(0, 14):
                inside = d >= g - 1 and Fraction(d, g) <= high
                assert ((g, d) in pts) == inside, (g, d, high)


def test_auto_g_bound():
    assert auto_g_bound(Fraction(3, 4)) == 4
    assert auto_g_bound(Fraction(4, 5)) == 5
    big = auto_g_bound(Fraction(7, 8))
    assert all(p.g <= big for p in bidegrees_between(Fraction(7, 8), big + 10))


def test_range_statement_renderings():
    assert range_statement("vanishing", 3, 2, -1).render() == "3d ≤ 2g-1"
    assert range_statement("epimorphism", 4, 3, -1).render() == "4d ≤ 3g-1"
    # twisted family at s = 1: e = -(2s+1)
    assert range_statement("epimorphism", 3, 2, -3).render() == "3d ≤ 2g-3"


def test_range_statement_normalization():
    s = range_statement("vanishing", 6, 4, -2)
    assert (s.a, s.b, s.e) == (3, 2, -1)
    with pytest.raises(DomainError):
        range_statement("vanishing", 0, 1, 0)
    with pytest.raises(InputError):
        range_statement("nonsense", 1, 1, 0)


def test_satisfies_examples():
    assert range_statement("vanishing", 3, 2, -1).satisfies((3, 1))
    assert not range_statement("epimorphism", 4, 3, -5).satisfies((6, 4))
    # isomorphisms for 5d <= 4g-6 applied at (6,3): 15 <= 18
    assert range_statement("isomorphism", 5, 4, -6).satisfies((6, 3))


def test_render_parse_round_trip():
    for a, b, e in [(3, 2, -1), (4, 3, -1), (4, 3, -5), (5, 4, -1), (5, 4, -6),
                    (1, 1, 0), (2, 1, 3), (7, 5, 0)]:
        s = range_statement("vanishing", a, b, e)
        assert parse_range(s.render()) == s
    assert parse_range("3d <= 2g-1") == range_statement("vanishing", 3, 2, -1)


def test_vanishing_line():
    line = VanishingLine(Fraction(3, 4))
    assert line.strictly_below((8, 5))
    assert not line.strictly_below((8, 6))
    offset = VanishingLine(Fraction(2, 3), Fraction(1, 2))
    assert offset.strictly_below((2, 0))
    with pytest.raises(DomainError):
        VanishingLine(Fraction(0))
