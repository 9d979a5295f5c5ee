"""Unit tests for finite-horizon densities."""

from fractions import Fraction

import pytest

from affine_amenability.algebra import enumerate_basis, parse_element
from affine_amenability.errors import ExhaustionError, InputError, TruncationOverflow
from affine_amenability.folner import ExhaustionSpec
from affine_amenability.growth import ball
from affine_amenability.measure import (
    DensityReport,
    IntersectionMode,
    RegularPart,
    RegularSet,
    fk_bk_densities,
    invariance_defect,
    regular_density,
    summarize_tail,
)
from affine_amenability.params import load_exhaustion, regular_set_from_dict
from tests.conftest import gens


class TestSummarizeTail:
    def test_last_third(self):
        entries = [(k, Fraction(1, k)) for k in range(1, 7)]
        summary = summarize_tail(entries)
        assert summary.tail_start == 5
        assert summary.liminf == Fraction(1, 6)
        assert summary.limsup == Fraction(1, 5)
        assert not summary.converged

    def test_converged(self):
        entries = [(k, Fraction(1, 2) + Fraction(1, 1000 * k)) for k in range(1, 10)]
        assert summarize_tail(entries).converged

    def test_single_entry(self):
        summary = summarize_tail([(3, Fraction(1, 2))])
        assert summary.liminf == summary.limsup == Fraction(1, 2)
        assert summary.converged

    def test_custom_tolerance(self):
        entries = [(1, Fraction(0)), (2, Fraction(0)), (3, Fraction(0)), (4, Fraction(1, 10))]
        assert not summarize_tail(entries).converged
        assert summarize_tail(entries, Fraction(1, 2)).converged

    def test_empty(self):
        with pytest.raises(InputError):
            summarize_tail([])


class TestDensityReport:
    def test_values_in_range(self):
        with pytest.raises(ValueError, match="outside"):
            DensityReport("bad", ((1, Fraction(3)),))
        with pytest.raises(ValueError):
            DensityReport("bad", ((1, Fraction(-1, 2)),))

    def test_summary(self):
        report = DensityReport("F", ((1, Fraction(1, 2)), (2, Fraction(1, 3)), (3, Fraction(1, 4))))
        assert report.values == [Fraction(1, 2), Fraction(1, 3), Fraction(1, 4)]
        assert report.summary.liminf == Fraction(1, 4)


# ---------------------------------------------------------------------------
# Boundary densities
# ---------------------------------------------------------------------------


class TestBoundaryDensities:
    def test_polynomial_ring_one_variable(self, kx):
        window = enumerate_basis(kx, 21)
        result = fk_bk_densities(kx, parse_element("x", kx), ExhaustionSpec.balls(gens(kx)), range(1, 21), window)
        assert result.f_density.values == [Fraction(1, k + 1) for k in range(1, 21)]
        assert result.b_density.values == [Fraction(0)] * 20
        assert result.levels[2].leaving == ((0, 0, 0),)
        assert result.window_bound == 21

    def test_ex33_zero_products_stay_inside(self, ex33):
        window = enumerate_basis(ex33, 11)
        spec = load_exhaustion("ex33_wn", ex33)
        result = fk_bk_densities(ex33, parse_element("y", ex33), spec, range(1, 4), window)
        assert [lv.dim for lv in result.levels] == [4, 8, 14]
        assert result.f_density.values == [Fraction(1, n * n + n + 2) for n in range(1, 4)]
        # y^a x · y = 0 never counts as entering
        assert result.b_density.values == [Fraction(0)] * 3

    def test_ex33_prime(self, ex33):
        window = enumerate_basis(ex33, 8)
        spec = load_exhaustion("ex33_wn_prime", ex33)
        result = fk_bk_densities(ex33, parse_element("y", ex33), spec, range(1, 6), window)
        assert result.f_density.values == [Fraction(1, 2 * n + 2) for n in range(1, 6)]

    def test_entering_words(self, polyxy):
        window = enumerate_basis(polyxy, 4)
        spec = load_exhaustion("ex33_wn_prime", polyxy)
        result = fk_bk_densities(polyxy, parse_element("x", polyxy), spec, [1], window)
        # W'_1 = span{1, y, x, x*y}; x and x*y are pushed out, nothing enters
        assert result.levels[0].dim == 4
        assert sorted(result.levels[0].leaving) == [(0,), (0, 1)]
        assert result.levels[0].entering == ()

    def test_non_monomial_level(self, polyxy):
        window = enumerate_basis(polyxy, 4)
        spec = ExhaustionSpec.balls([parse_element("x + y", polyxy)])
        with pytest.raises(ExhaustionError, match="basis words"):
            fk_bk_densities(polyxy, parse_element("x", polyxy), spec, [1], window)

    def test_overflow(self, kx):
        window = enumerate_basis(kx, 3)
        with pytest.raises(TruncationOverflow) as exc:
            fk_bk_densities(kx, parse_element("x", kx), ExhaustionSpec.balls(gens(kx)), range(1, 4), window)
        assert exc.value.level == 3

    def test_zero_element(self, kx):
        window = enumerate_basis(kx, 3)
        with pytest.raises(InputError):
            fk_bk_densities(kx, parse_element("x - x", kx), ExhaustionSpec.balls(gens(kx)), [1], window)


# ---------------------------------------------------------------------------
# Regular sets
# ---------------------------------------------------------------------------


class TestRegularDensity:
    def test_full_basis(self, free2):
        window = enumerate_basis(free2, 4)
        V = ball(free2, gens(free2), 2, window)
        assert regular_density(RegularSet.full_basis(free2), V, window) == 1

    def test_translated_basis(self, free2):
        window = enumerate_basis(free2, 4)
        V = ball(free2, gens(free2), 3, window)
        L = RegularSet((RegularPart(parse_element("x", free2)),))
        # words ending in x of length 1..3
        assert regular_density(L, V, window) == Fraction(7, 15)

    def test_span_mode_on_non_monomial_set(self, polyxy):
        window = enumerate_basis(polyxy, 3)
        V = window.span_words([(), (0,)])
        L = RegularSet((RegularPart(parse_element("1 + x", polyxy), ((),)), RegularPart(polyxy.one(), ((0,),))))
        # 1 + x and x both lie in V, and their span is all of V
        assert regular_density(L, V, window, IntersectionMode.COUNT) == 1
        assert regular_density(L, V, window, IntersectionMode.SPAN) == 1

    def test_dependent_parts(self, free2):
        window = enumerate_basis(free2, 3)
        L = RegularSet((RegularPart(free2.one()), RegularPart(parse_element("x", free2))))
        with pytest.raises(InputError, match="independent"):
            regular_density(L, ball(free2, gens(free2), 1, window), window)

    def test_zero_translator(self, free2):
        window = enumerate_basis(free2, 3)
        L = RegularSet((RegularPart(parse_element("0*x", free2)),))
        with pytest.raises(InputError, match="nonzero"):
            regular_density(L, ball(free2, gens(free2), 1, window), window)

    def test_word_outside_window(self, free2):
        window = enumerate_basis(free2, 2)
        L = RegularSet((RegularPart(free2.one(), ((0, 0, 0),)),))
        with pytest.raises(InputError, match="normal word"):
            regular_density(L, ball(free2, gens(free2), 1, window), window)

    def test_zero_space(self, free2):
        window = enumerate_basis(free2, 2)
        with pytest.raises(InputError):
            regular_density(RegularSet.full_basis(free2), window.span_words([]), window)

    def test_from_dict(self, free2):
        L = regular_set_from_dict({"parts": [{"translator": "x", "words": ["1", "y"]}, {"translator": "y"}]}, free2)
        assert L.parts[0].words == ((), (1,))
        assert L.parts[1].words is None
        with pytest.raises(InputError):
            regular_set_from_dict({"parts": [{"words": ["1"]}]}, free2)


class TestInvarianceDefect:
    def test_free_algebra(self, free2):
        window = enumerate_basis(free2, 6)
        report = invariance_defect(
            RegularSet.full_basis(free2), gens(free2)[0], ExhaustionSpec.balls(gens(free2)), range(1, 6), window
        )
        assert report.values == [Fraction(2**k, 2 ** (k + 1) - 1) for k in range(1, 6)]
        assert report.label == "defect r=x"

    def test_polynomial_ring_one_variable(self, kx):
        window = enumerate_basis(kx, 13)
        report = invariance_defect(
            RegularSet.full_basis(kx), parse_element("x", kx), ExhaustionSpec.balls(gens(kx)), range(1, 13), window
        )
        assert report.values == [Fraction(1, k + 1) for k in range(1, 13)]
        assert report.summary.limsup == Fraction(1, 10)

    def test_span_mode_agrees_on_monomial_sets(self, free2):
        window = enumerate_basis(free2, 5)
        args = (RegularSet.full_basis(free2), gens(free2)[1], ExhaustionSpec.balls(gens(free2)), range(1, 5), window)
        count = invariance_defect(*args)
        spanned = invariance_defect(*args, mode=IntersectionMode.SPAN)
        assert count.values == spanned.values
        assert spanned.mode is IntersectionMode.SPAN

    def test_overflow(self, kx):
        window = enumerate_basis(kx, 4)
        with pytest.raises(TruncationOverflow):
            invariance_defect(
                RegularSet.full_basis(kx), parse_element("x", kx), ExhaustionSpec.balls(gens(kx)), range(1, 5), window
            )

    def test_zero_element(self, kx):
        window = enumerate_basis(kx, 4)
        with pytest.raises(InputError):
            invariance_defect(
                RegularSet.full_basis(kx), parse_element("0", kx), ExhaustionSpec.balls(gens(kx)), [1], window
            )
