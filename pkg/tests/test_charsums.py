import math

import pytest

from ffmoments.charsums import (
    CharSumSpec,
    char_prefix_sum,
    circle_integral_moment,
    perron_contour_value,
    s_m_moment,
    theorem2_bound,
)
from ffmoments.errors import DomainError
from ffmoments.galois import Poly, enumerate_monic, field
from ffmoments.kernel import jacobi
from ffmoments.lfunction import lpoly_euler
from ffmoments.primes import enumerate_H, family_size


def direct_prefix_sum(d, n):
    """Oracle: literal double loop over monic f with deg f <= n."""
    fs = d.field
    total = 0
    for deg in range(n + 1):
        for f in enumerate_monic(fs, deg):
            total += jacobi(list(d.coeffs), list(f.coeffs), fs)
    return total


class TestSpec:
    def test_m_floor(self):
        with pytest.raises(DomainError):
            CharSumSpec(3, 1, 1.0, 1)
        with pytest.warns(UserWarning):
            CharSumSpec(3, 1, 1.0, 1, allow_small_m=True)
        with pytest.raises(DomainError):
            CharSumSpec(3, 1, 2.0, -1)

    def test_y(self):
        assert CharSumSpec(3, 1, 1.5, 2).y == 9


class TestPrefixSums:
    def test_n0_is_one(self, f3):
        for d in enumerate_H(f3, 1):
            assert char_prefix_sum(lpoly_euler(d), 0) == 1

    @pytest.mark.parametrize("g", [1, 2])
    def test_matches_direct_enumeration_exhaustive(self, f3, g):
        for d in enumerate_H(f3, g):
            lp = lpoly_euler(d)
            for n in range(0, 2 * g + 3):
                assert char_prefix_sum(lp, n) == direct_prefix_sum(d, n)

    def test_stabilizes_beyond_2g(self, f3):
        for d in enumerate_H(f3, 1):
            lp = lpoly_euler(d)
            final = char_prefix_sum(lp, 2)
            for n in range(2, 8):
                assert char_prefix_sum(lp, n) == final

    def test_h33_value_is_one_plus_c1(self, f3):
        for d in enumerate_H(f3, 1):
            lp = lpoly_euler(d)
            assert char_prefix_sum(lp, 1) == 1 + lp.coeffs[1]


class TestSmMoment:
    @pytest.mark.parametrize("m", [1.5, 2.0])
    @pytest.mark.parametrize("q,g", [(3, 1), (3, 2), (5, 1)])
    def test_y1_equals_family_size(self, q, g, m):
        rep = s_m_moment(CharSumSpec(q, g, m, 0))
        assert rep.value == family_size(field(q), g)
        assert rep.family_size == family_size(field(q), g)

    def test_brute_force_value(self, f3):
        # 18 exact prefix sums, |.|^3 summed as integers
        expected = sum(
            abs(char_prefix_sum(lpoly_euler(d), 1)) ** 3 for d in enumerate_H(f3, 1)
        )
        rep = s_m_moment(CharSumSpec(3, 1, 1.5, 1))
        assert rep.value == float(expected)

    def test_fractional_exponent_route(self, f3):
        rep = s_m_moment(CharSumSpec(3, 1, 1.75, 1))
        expected = math.fsum(
            abs(char_prefix_sum(lpoly_euler(d), 1)) ** 3.5 for d in enumerate_H(f3, 1)
        )
        assert rep.value == pytest.approx(expected, rel=1e-13)

    def test_histogram_totals(self):
        rep = s_m_moment(CharSumSpec(3, 2, 1.5, 2))
        assert sum(rep.histogram.values()) == rep.family_size

    def test_report_schema(self):
        d = s_m_moment(CharSumSpec(3, 1, 1.5, 1)).to_dict()
        assert set(d) == {"schema_version", "spec", "value", "bound", "ratio", "family_size", "histogram"}


class TestBound:
    def test_exponent_example(self):
        # exponent 2m^2 - m + 1 evaluates to 4 at m = 3/2
        rep = theorem2_bound(CharSumSpec(3, 1, 1.5, 0))
        assert rep == pytest.approx(27 * math.log(27) ** 4, rel=1e-13)

    def test_y_scaling(self):
        b1 = theorem2_bound(CharSumSpec(3, 1, 1.5, 1))
        b2 = theorem2_bound(CharSumSpec(3, 1, 1.5, 2))
        assert b2 / b1 == pytest.approx(3**1.5, rel=1e-13)

    def test_x_scaling_closed_form(self):
        m = 2.0
        e = 2 * m**2 - m + 1
        b1 = theorem2_bound(CharSumSpec(3, 1, m, 0))
        b2 = theorem2_bound(CharSumSpec(3, 2, m, 0))
        expected = 9 * (math.log(3**5) / math.log(3**3)) ** e
        assert b2 / b1 == pytest.approx(expected, rel=1e-13)


class TestCircleMoment:
    def test_g0_closed_form(self):
        rep = circle_integral_moment(3, 0, 1.5, points=128)
        assert rep.value == pytest.approx(3 * (2 * math.pi) ** 3, rel=1e-12)

    def test_quadrature_doubling(self):
        a = circle_integral_moment(3, 1, 1.5, points=128)
        b = circle_integral_moment(3, 1, 1.5, points=256)
        assert abs(a.value - b.value) / b.value < 1e-10

    def test_minimum_points(self):
        with pytest.raises(DomainError):
            circle_integral_moment(3, 1, 1.5, points=32)

    def test_ratio_recorded(self):
        rep = circle_integral_moment(3, 1, 1.5, points=128)
        assert rep.ratio == pytest.approx(rep.value / rep.bound)
        assert math.isfinite(rep.ratio) and rep.ratio > 0


class TestPerronContourMode:
    def test_agrees_with_prefix_sums(self, f3):
        for d in list(enumerate_H(f3, 2))[:20]:
            lp = lpoly_euler(d)
            for n in range(0, 7):
                numeric = perron_contour_value(lp, n)
                exact = char_prefix_sum(lp, n)
                assert abs(numeric - exact) < 1e-8

    def test_point_floor(self, f3):
        lp = lpoly_euler(Poly.decode(f3, 34))
        with pytest.raises(DomainError):
            perron_contour_value(lp, 1, points=16)
