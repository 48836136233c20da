from fractions import Fraction
from math import isqrt

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from posicert import GeneratorSet, IntervalUnion, Poly, PreconditionError, parse_poly, sturm_count
from posicert.diagnostics import (
    FAILS, HOLDS, UNDECIDED, Custom, HalfStrip, Strip, dyadic_sequence, endpoint_generator_check, fiber_set,
    obstruction_scan, sample_points, sample_refute_2d,
)
from strategies import interval_unions, polys

P = parse_poly
F = Fraction
U01 = IntervalUnion.parse("[0,1]")


def gens(text):
    return GeneratorSet(tuple(P(t, 2) for t in text.split(";")))


PARABOLA = gens("x - x^2; y^2 - x; y")


class TestRefute:
    def test_examples(self):
        w = sample_refute_2d(P("-1", 2), Strip(U01), 10)
        assert w is not None and w.value == -1
        assert sample_refute_2d(P("y^2"), Strip(U01), 1000) is None
        w = sample_refute_2d(P("y"), Strip(U01), 1000)
        assert w is not None and w.y < 0

    def test_half_strip(self):
        assert sample_refute_2d(P("y"), HalfStrip(U01), 1000) is None
        assert sample_refute_2d(P("y - x^2"), HalfStrip(U01, P("x^2")), 1000) is None
        w = sample_refute_2d(P("y - 2"), HalfStrip(U01, P("x")), 1000)
        assert w is not None and w.y >= w.x and w.value < 0

    def test_custom(self):
        w = sample_refute_2d(P("x*y - 1"), Custom(gens("x - x^2; y")), 500)
        assert w is not None and 0 <= w.x <= 1 and w.y >= 0

    def test_large_y_probe(self):
        # negative only for y < -1000
        f = P("y + 1000 + x")
        assert sample_refute_2d(f, Strip(U01), 64) is not None

    def test_budget(self):
        with pytest.raises(PreconditionError):
            sample_refute_2d(P("y"), Strip(U01), 0)

    def test_deterministic(self):
        assert sample_points(Strip(U01), 200) == sample_points(Strip(U01), 200)
        assert all(p[0].denominator & (p[0].denominator - 1) == 0 for p in sample_points(Strip(U01), 200))

    @settings(max_examples=200)
    @given(polys(2, 3, 4), interval_unions(), st.sampled_from(["strip", "half", "custom"]))
    def test_no_false_witness(self, f, U, kind):
        region = {"strip": Strip(U), "half": HalfStrip(U, P("x^2")), "custom": Custom(gens("x - x^2; y - x"))}[kind]
        w = sample_refute_2d(f, region, 100)
        if w is not None:
            assert region.contains(w.x, w.y) and f(w.x, w.y) == w.value < 0


class TestFiber:
    def test_examples(self):
        assert fiber_set(PARABOLA, F(1, 4)).to_text() == "[1/2, inf)"
        assert fiber_set(gens("x - x^2; y"), F(1, 2)).to_text() == "[0, inf)"
        assert fiber_set(GeneratorSet((P("x - x^2"),)), F(1, 2)).to_text() == "(-inf, inf)"

    def test_shapes(self):
        assert fiber_set(gens("1 - y^2"), 0).to_text() == "[-1, 1]"
        assert fiber_set(gens("y^2*(y - 1)"), 0).to_text() == "{0} u [1, inf)"
        assert fiber_set(gens("-1"), 0).to_text() == "empty"
        assert fiber_set(gens("x - 1"), 0).is_empty
        assert fiber_set(gens("y^2 - 1"), 0).to_text() == "(-inf, -1] u [1, inf)"
        assert fiber_set(gens("-(y - 1)^2"), 0).to_text() == "{1}"
        assert fiber_set(gens("(y-1)*(y-2)*(y-3)"), 0).to_text() == "[1, 2] u [3, inf)"

    def test_dropped_constraint(self):
        fs = fiber_set(gens("x*y; y - 1"), 0)
        assert fs.to_text() == "[1, inf)" and len(fs.dropped) == 1

    def test_algebraic_endpoint(self):
        fs = fiber_set(PARABOLA, F(1, 2))
        ell = fs.ray_endpoint()
        assert ell is not None and not ell.is_exact
        assert ell.poly == P("x^2 - 1/2")
        assert fs.to_text().startswith("[root of y^2 - 1/2 in (")

    @given(st.builds(F, st.integers(1, 99), st.just(100)))
    def test_refinement_keeps_count(self, c):
        fs = fiber_set(PARABOLA, c)
        ell = fs.ray_endpoint()
        fine = ell.refine(F(1, 2 ** 30))
        assert sturm_count(ell.poly, fine.lo, fine.hi) == 1 or fine.is_exact
        assert fine.lo >= ell.lo and fine.hi <= ell.hi


class TestEndpointCheck:
    def test_parabola(self):
        r = endpoint_generator_check(PARABOLA, F(1, 4))
        assert r.status == FAILS and r.endpoint == "1/2"
        assert r.candidates == ("3/16", "y^2 - 1/4", "y")

    def test_linear_generator(self):
        r = endpoint_generator_check(gens("x - x^2; y - x"), F(1, 4))
        assert r.status == HOLDS and r.matching == "y - 1/4"

    def test_cubic(self):
        r = endpoint_generator_check(gens("x - x^2; y^3 - x; y"), F(1, 8))
        assert r.status == FAILS and r.endpoint == "1/2"

    def test_negative_multiple_does_not_count(self):
        r = endpoint_generator_check(gens("y - 1; 2*y - 2"), 0)
        assert r.status == HOLDS
        fs = fiber_set(gens("y - 1; 1 - y; y^2 - 1"), 0)
        assert fs.to_text() == "{1}"

    def test_precondition(self):
        with pytest.raises(PreconditionError):
            endpoint_generator_check(gens("1 - y^2"), 0)

    def test_undecided_at_precision(self):
        # a rational just below sqrt(2): the fiber is [sqrt 2, inf) and y - r is a near miss
        r = F(isqrt(2 * 4 ** 80), 2 ** 80)
        S = GeneratorSet((P("y^2 - 2", 2), P("y", 2) - r))
        assert endpoint_generator_check(S, 0, precision_bits=64).status == UNDECIDED
        assert endpoint_generator_check(S, 0, precision_bits=200).status == FAILS

    @settings(max_examples=200)
    @given(st.builds(F, st.integers(1, 399), st.just(400)))
    def test_parabola_fails_everywhere(self, c):
        assert endpoint_generator_check(PARABOLA, c).status == FAILS


class TestObstruction:
    def test_parabola(self):
        r = obstruction_scan(PARABOLA, U01, 16)
        assert (r.samples, r.applicable, r.fails) == (16, 16, 16)
        assert r.failure_fraction == 1
        assert "proves nothing" in r.note

    def test_half_strip(self):
        r = obstruction_scan(gens("x - x^2; y"), U01, 16)
        assert (r.applicable, r.holds, r.fails) == (16, 16, 0)
        assert "proves nothing" in r.note

    def test_no_y_constraints(self):
        r = obstruction_scan(GeneratorSet((P("x - x^2"),)), U01, 16)
        assert r.applicable == 0 and r.failure_fraction is None
        assert "does not apply" in r.note

    def test_samples_are_dyadic_interior(self):
        assert dyadic_sequence(4) == [F(1, 2), F(1, 4), F(3, 4), F(1, 8)]
        r = obstruction_scan(PARABOLA, IntervalUnion.parse("[0,1/2]u[3/4,1]"), 20)
        for row in r.per_sample:
            c = F(row["c"])
            assert 0 < c < F(1, 2) or F(3, 4) < c < 1

    def test_deterministic(self):
        a = obstruction_scan(PARABOLA, U01, 16).to_dict()
        assert a == obstruction_scan(PARABOLA, U01, 16).to_dict()

    def test_samples_positive(self):
        with pytest.raises(PreconditionError):
            obstruction_scan(PARABOLA, U01, 0)
