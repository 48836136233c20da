from fractions import Fraction

import pytest
import sympy
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from oracles import SYMS, count_roots_half_open, sampled_min, to_sympy
from posicert import (
    IntervalUnion, Poly, PreconditionError, decide_nonneg_on_U, factor_low_degree, isolate_roots,
    parse_poly, square_free_decompose, sturm_count,
)
from posicert.roots import odd_part, rational_roots
from strategies import interval_unions, nonzero_polys, rationals

P = parse_poly
F = Fraction


class TestIntervalUnion:
    def test_parse_and_print(self):
        U = IntervalUnion.parse("[0,1]u[2,3]")
        assert U.intervals == ((0, 1), (2, 3))
        assert str(U) == "[0,1]u[2,3]"
        assert IntervalUnion.parse("{1/2}").intervals == ((F(1, 2), F(1, 2)),)
        assert IntervalUnion.parse("[0,1] ∪ [2,3]") == U

    @pytest.mark.parametrize("bad", ["[1,0]", "[0,1]u[1,2]", "[2,3]u[0,1]", "(0,1)", ""])
    def test_rejects_invalid(self, bad):
        with pytest.raises(PreconditionError):
            IntervalUnion.parse(bad)

    def test_gaps_and_membership(self):
        U = IntervalUnion.parse("[0,1]u{3/2}u[2,3]")
        assert U.gaps() == [(1, F(3, 2)), (F(3, 2), 2)]
        assert F(3, 2) in U and F(5, 4) not in U


class TestSturm:
    def test_examples(self):
        assert sturm_count(P("x^2 - 2"), 0, 2) == 1
        assert sturm_count(P("x^2 + 1"), -10, 10) == 0
        assert sturm_count(P("(x-1)^2*(x-3)"), 0, 2) == 1

    def test_half_open(self):
        assert sturm_count(P("x"), 0, 1) == 0
        assert sturm_count(P("x"), -1, 0) == 1
        assert sturm_count(P("x^3 - x")) == 3

    def test_zero_rejected(self):
        with pytest.raises(PreconditionError):
            sturm_count(Poly.zero(1), 0, 1)

    @settings(max_examples=500)
    @given(nonzero_polys(1, 8, 6), rationals, rationals)
    def test_agrees_with_sympy(self, p, a, b):
        lo, hi = min(a, b), max(a, b)
        assume(p.degree() >= 1)
        assert sturm_count(p, lo, hi) == count_roots_half_open(p, lo, hi)


class TestIsolation:
    def test_sqrt2(self):
        ivs = isolate_roots(P("x^2 - 2"))
        assert len(ivs) == 2
        assert all(iv.width <= 1 for iv in ivs)
        assert ivs[0].compare(0) < 0 < ivs[1].compare(0)
        assert ivs[1].lo < F(1414, 1000) < F(1415, 1000) <= ivs[1].refine(F(1, 1000)).hi + F(1, 1000)

    def test_exact_and_empty(self):
        (iv,) = isolate_roots(P("x^2"))
        assert iv.is_exact and iv.lo == 0
        assert isolate_roots(P("x^2 + 1")) == []

    def test_refine_keeps_root(self):
        iv = isolate_roots(P("x^3 - 3"))[0].refine(F(1, 2 ** 40))
        assert iv.width <= F(1, 2 ** 40)
        assert sturm_count(P("x^3 - 3"), iv.lo, iv.hi) == 1

    def test_rational_roots(self):
        assert rational_roots(P("6x^3 - 5x^2 - 2x + 1")) == [F(-1, 2), F(1, 3), 1]

    @given(nonzero_polys(1, 7, 6))
    def test_one_sign_change_each(self, p):
        assume(p.degree() >= 1)
        ivs = isolate_roots(p)
        assert len(ivs) == count_roots_half_open(p, None, None)
        for a, b in zip(ivs, ivs[1:]):
            assert a.hi <= b.lo
        for iv in ivs:
            if iv.is_exact:
                assert p(iv.lo) == 0
            else:
                assert sturm_count(iv.poly, iv.lo, iv.hi) == 1
                assert iv.poly(iv.lo) * iv.poly(iv.hi) < 0


class TestFactoring:
    def test_square_free_examples(self):
        fl = square_free_decompose(P("(x-1)^2*(x+2)"))
        assert fl.unit == 1 and set(fl.factors) == {(P("x-1"), 2), (P("x+2"), 1)}
        fl = square_free_decompose(P("x^3"))
        assert fl.unit == 1 and fl.factors == ((P("x"), 3),)
        fl = square_free_decompose(P("6x^2 - 6"))
        assert fl.unit == 6 and set(fl.factors) == {(P("x-1"), 1), (P("x+1"), 1)}

    def test_low_degree_examples(self):
        fl = factor_low_degree(P("x^4 - 1"))
        assert fl.complete and set(fl.factors) == {(P("x-1"), 1), (P("x+1"), 1), (P("x^2+1"), 1)}
        fl = factor_low_degree(P("x^2 - x"))
        assert set(fl.factors) == {(P("x"), 1), (P("x-1"), 1)}

    def test_irreducible_quartic_flagged(self):
        fl = factor_low_degree(P("x^4 + x + 1"))
        assert not fl.complete
        assert fl.unfactored[0][0] == P("x^4 + x + 1")
        assert sympy.Poly(to_sympy(P("x^4 + x + 1")), SYMS[0]).is_irreducible

    def test_product_of_quadratics(self):
        fl = factor_low_degree(P("(x^2 - x - 1)*(2x^2 + 3x + 7)"))
        assert fl.complete and fl.unit == 2
        assert set(fl.factors) == {(P("x^2 - x - 1"), 1), (P("x^2 + 3/2x + 7/2"), 1)}

    def test_odd_part(self):
        unit, odd, half = odd_part(P("-3*(x-1)^3*(x+2)^2*(x^2+1)"))
        assert unit == -3 and odd == P("(x-1)*(x^2+1)") and half == P("(x-1)*(x+2)")

    @given(st.lists(st.tuples(st.integers(-5, 5), st.integers(-5, 5), st.integers(1, 3)), min_size=1, max_size=3),
           st.integers(1, 4))
    def test_reconstructs_and_matches_sympy(self, quads, lead):
        p = Poly.constant(lead)
        for b, c, m in quads:
            p = p * P(f"x^2 + {b}x + {c}") ** m
        fl = factor_low_degree(p)
        assert fl.product() == p
        for f, _ in fl.factors:
            assert f.leading_coefficient() == 1
            assert sympy.Poly(to_sympy(f), SYMS[0]).is_irreducible
        assert fl.complete

    @given(nonzero_polys(1, 6, 5))
    def test_square_free_reconstructs(self, p):
        fl = square_free_decompose(p)
        assert fl.product() == p
        fs = [f for f, _ in fl.factors]
        for i, f in enumerate(fs):
            assert f.leading_coefficient() == 1 and f.degree() >= 1
            for g in fs[i + 1:]:
                assert sympy.gcd(to_sympy(f), to_sympy(g)) == 1


class TestDecide:
    def test_examples(self):
        assert decide_nonneg_on_U(P("x - x^2"), IntervalUnion.parse("[0,1]"))
        v = decide_nonneg_on_U(P("-1"), IntervalUnion.parse("[0,1]"))
        assert not v and v.witness in IntervalUnion.parse("[0,1]") and v.value < 0
        assert decide_nonneg_on_U(P("(x-1)*(x-2)"), IntervalUnion.parse("[0,1]u[2,3]"))

    def test_touching_root_inside(self):
        assert decide_nonneg_on_U(P("(x - 1/3)^2"), IntervalUnion.parse("[0,1]"))
        v = decide_nonneg_on_U(P("(x - 1/3)^2 * (x - 1/2)"), IntervalUnion.parse("[0,1]"))
        assert not v and v.value < 0

    def test_negative_between_close_roots(self):
        p = P("(x - 1/1000)*(x - 1/999)")
        v = decide_nonneg_on_U(p, IntervalUnion.parse("[0,1]"))
        assert not v and p(v.witness) < 0 and F(1, 1000) < v.witness < F(1, 999)

    def test_irrational_dip(self):
        p = P("x^2 - 2x + 1 - 1/10^8")
        v = decide_nonneg_on_U(p, IntervalUnion.parse("[0,3]"))
        assert not v and p(v.witness) == v.value < 0

    def test_points(self):
        U = IntervalUnion.parse("{2}")
        assert decide_nonneg_on_U(P("x - 2"), U)
        assert not decide_nonneg_on_U(P("1 - x"), U)

    @settings(max_examples=500)
    @given(nonzero_polys(1, 6, 5), interval_unions())
    def test_agrees_with_dense_sampling(self, p, U):
        v = decide_nonneg_on_U(p, U)
        if sampled_min(p, U, 64) < 0:
            assert not v
        if not v:
            assert v.witness in U and p(v.witness) == v.value < 0
