"""Unit tests for balls and growth sequences."""

from fractions import Fraction

import pytest

from affine_amenability.algebra import enumerate_basis, parse_element
from affine_amenability.errors import InputError, TruncationOverflow
from affine_amenability.growth import (
    INCONCLUSIVE,
    SUBEXPONENTIAL,
    GrowthSeries,
    ball,
    classify,
    growth_sequence,
    iter_balls,
    subexp_probe,
    subexponential_schedule,
)
from tests.conftest import gens


class TestGrowthSequence:
    def test_free_algebra(self, free2):
        g = growth_sequence(free2, gens(free2), 5, enumerate_basis(free2, 5))
        assert g.d == tuple(2 ** (m + 1) - 1 for m in range(6))
        assert g.m_max == 5

    def test_polynomial_ring(self, polyxy):
        g = growth_sequence(polyxy, gens(polyxy), 6, enumerate_basis(polyxy, 6))
        assert g.d == tuple((m + 1) * (m + 2) // 2 for m in range(7))

    def test_polynomial_one_variable(self, kx):
        g = growth_sequence(kx, gens(kx), 8, enumerate_basis(kx, 8))
        assert g.d == tuple(range(1, 10))

    def test_ex33(self, ex33):
        g = growth_sequence(ex33, gens(ex33), 6, enumerate_basis(ex33, 6))
        assert g.d == tuple(2 * m + 1 for m in range(7))

    def test_group_algebra(self, z2grp):
        g = growth_sequence(z2grp, gens(z2grp), 3, enumerate_basis(z2grp, 3))
        # lattice points with |a| + |b| <= m
        assert g.d == (1, 5, 13, 25)

    def test_higher_degree_generator(self, kx):
        S = [parse_element("x^2", kx)]
        g = growth_sequence(kx, S, 3, enumerate_basis(kx, 6))
        assert g.d == (1, 2, 3, 4)

    def test_presentation_id(self, kx):
        g = growth_sequence(kx, gens(kx), 2, enumerate_basis(kx, 2), presentation_id="K[x]")
        assert g.presentation_id == "K[x]"

    def test_must_be_nondecreasing(self):
        with pytest.raises(ValueError, match="nondecreasing"):
            GrowthSeries("bad", (), (1, 3, 2))


class TestBall:
    def test_ball_contains_unit(self, free2):
        window = enumerate_basis(free2, 2)
        b = ball(free2, gens(free2), 0, window)
        assert b.dim == 1
        assert b.pivots == (0,)

    def test_balls_are_nested(self, polyxy):
        window = enumerate_basis(polyxy, 4)
        spaces = list(iter_balls(polyxy, gens(polyxy), 4, window))
        assert [s.dim for s in spaces] == [1, 3, 6, 10, 15]
        assert ball(polyxy, gens(polyxy), 3, window) == spaces[3]

    def test_non_monomial_generators(self, polyxy):
        window = enumerate_basis(polyxy, 2)
        b = ball(polyxy, [parse_element("x + y", polyxy)], 2, window)
        assert b.dim == 3
        assert not b.is_monomial()

    def test_overflow(self, free2):
        window = enumerate_basis(free2, 2)
        with pytest.raises(TruncationOverflow) as exc:
            ball(free2, gens(free2), 3, window)
        assert exc.value.required == 3
        assert exc.value.bound == 2

    def test_negative_radius(self, free2):
        with pytest.raises(InputError):
            list(iter_balls(free2, gens(free2), -1, enumerate_basis(free2, 1)))


class TestSubexpProbe:
    def test_polynomial_growth(self, polyxy):
        g = growth_sequence(polyxy, gens(polyxy), 6, enumerate_basis(polyxy, 6))
        assert subexp_probe(g, Fraction(1, 2), 1) == 3
        assert classify(g, Fraction(1, 2)) == SUBEXPONENTIAL

    def test_exponential_growth(self, free2):
        g = growth_sequence(free2, gens(free2), 6, enumerate_basis(free2, 6))
        assert subexp_probe(g, Fraction(1, 2), 1) is None
        assert classify(g, Fraction(1, 2)) == INCONCLUSIVE

    def test_gap(self):
        g = GrowthSeries("kx", (), tuple(range(1, 12)))
        # d[m+3] <= 1.5 d[m]  <=>  m + 4 <= 1.5 (m + 1)
        assert subexp_probe(g, Fraction(1, 2), 3) == 5

    def test_invalid_parameters(self):
        g = GrowthSeries("kx", (), (1, 2, 3))
        with pytest.raises(InputError):
            subexp_probe(g, Fraction(0), 1)
        with pytest.raises(InputError):
            subexp_probe(g, Fraction(1, 2), 0)


class TestSubexponentialSchedule:
    def test_polynomial_ring_in_one_variable(self):
        g = GrowthSeries("kx", (), tuple(range(1, 42)))
        assert subexponential_schedule(g, 5) == [(1, 1), (2, 7), (3, 23)]

    def test_radii_are_nondecreasing(self, polyxy):
        g = growth_sequence(polyxy, gens(polyxy), 12, enumerate_basis(polyxy, 12))
        schedule = subexponential_schedule(g, 4)
        radii = [m for _, m in schedule]
        assert radii == sorted(radii)
        for n, m in schedule:
            assert g.d[m + n] <= g.d[m] * (1 + Fraction(1, 2**n))

    def test_exponential_growth_stops(self, free2):
        g = growth_sequence(free2, gens(free2), 6, enumerate_basis(free2, 6))
        assert subexponential_schedule(g, 3) == []
