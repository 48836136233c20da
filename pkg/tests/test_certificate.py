import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mutation import expansions_differ, mutate
from oracles import cert_to_sympy, naive_eval, same_poly
from posicert import (
    MODULE, PREORDERING, ArityError, Certificate, CertificateError, GeneratorSet, Poly, SOS,
    expand, multiply, parse_poly, random_certificate, to_preordering, verify,
)
from posicert.certificate import CertBuilder, certificate_from_dict, certificate_to_dict, dumps, loads

P = parse_poly
ONE2 = Poly.constant(1, 2)


def strip_square_shape():
    return Certificate(GeneratorSet((P("x - x^2", 2),)), (((0,), SOS.of(P("y"))), ((1,), SOS.of(ONE2))))


def two_gens(n=2):
    return GeneratorSet((P("x - x^2", n), P("y - 1", n) if n > 1 else P("1 - x")))


class TestConstruction:
    def test_module_rule(self):
        gs = GeneratorSet((P("x"), P("1 - x")))
        with pytest.raises(CertificateError):
            Certificate(gs, (((1, 1), SOS.of(P("1"))),), MODULE)
        Certificate(gs, (((1, 1), SOS.of(P("1"))),), PREORDERING)

    def test_bad_exponents(self):
        gs = GeneratorSet((P("x"),))
        with pytest.raises(CertificateError):
            Certificate(gs, (((2,), SOS.of(P("1"))),))
        with pytest.raises(CertificateError):
            Certificate(gs, (((0, 0), SOS.of(P("1"))),))

    def test_sos_coefficients_positive(self):
        with pytest.raises(CertificateError):
            SOS(((Fraction(0), P("x")),))
        with pytest.raises(CertificateError):
            SOS(((Fraction(-1), P("x")),))

    def test_genset_invariants(self):
        with pytest.raises(CertificateError):
            GeneratorSet(())
        with pytest.raises(CertificateError):
            GeneratorSet((Poly.zero(1),))
        with pytest.raises(ArityError):
            GeneratorSet((P("x"), P("y")))

    def test_square_arity(self):
        with pytest.raises(ArityError):
            Certificate(GeneratorSet((P("x"),)), (((0,), SOS.of(P("y"))),))


class TestExpandVerify:
    def test_constant(self):
        c = Certificate(GeneratorSet((P("x"),)), (((0,), SOS.of(P("1"))),))
        assert expand(c) == 1

    def test_strip_square_shape(self):
        assert expand(strip_square_shape()) == P("y^2 + x - x^2")

    def test_closure_identity_shape(self):
        gs = GeneratorSet((P("x"), P("1 - x")))
        c = Certificate(gs, (((1, 0), SOS.of(P("1 - x"))), ((0, 1), SOS.of(P("x")))), MODULE)
        assert expand(c) == P("x - x^2")

    def test_accept(self):
        assert verify(strip_square_shape(), P("y^2 + x - x^2"))

    def test_reject_reports_first_monomial(self):
        v = verify(strip_square_shape(), P("y^2 + x"))
        assert not v
        assert v.monomial == (2, 0) and v.certificate_coeff == -1 and v.target_coeff == 0
        assert v.to_dict()["monomial"] == "x^2"
        assert "x^2" in v.describe()

    def test_second_closure_identity(self):
        gs = GeneratorSet((P("x"), P("1 - x")))
        c = Certificate(gs, (((0, 0), SOS.of(P("x"))), ((1, 1), SOS.of(P("1")))), PREORDERING)
        assert verify(c, P("x"))

    def test_arity_mismatch(self):
        with pytest.raises(ArityError):
            verify(strip_square_shape(), P("x"))

    def test_empty_certificate_is_zero(self):
        assert verify(Certificate(two_gens(), ()), Poly.zero(2))


class TestPreordering:
    def test_relabels_module(self):
        c = Certificate(two_gens(), (((1, 0), SOS.of(ONE2)),), MODULE)
        p = to_preordering(c)
        assert p.kind == PREORDERING and p.terms == c.terms

    def test_idempotent(self):
        c = Certificate(two_gens(), (((1, 1), SOS.of(ONE2)),))
        assert to_preordering(c) is c

    @settings(max_examples=100)
    @given(st.integers(0, 10 ** 6))
    def test_expand_unchanged(self, seed):
        c = random_certificate(two_gens(), 2, 3, seed, kind=MODULE)
        assert expand(to_preordering(c)) == expand(c)


class TestRandom:
    def test_deterministic(self):
        a = random_certificate(two_gens(), 2, 1, seed=7)
        b = random_certificate(two_gens(), 2, 1, seed=7)
        assert a == b and dumps(a) == dumps(b)
        assert random_certificate(two_gens(), 2, 1, seed=8) != a

    def test_bounds(self):
        with pytest.raises(ValueError):
            random_certificate(two_gens(), 0, 1, 0)

    @given(st.integers(0, 10 ** 6))
    def test_verifies_against_own_expansion(self, seed):
        c = random_certificate(two_gens(), 3, 4, seed)
        assert verify(c, expand(c))

    @settings(max_examples=20)
    @given(st.integers(0, 10 ** 6))
    def test_nonnegative_on_set(self, seed):
        gs = two_gens()
        f = expand(random_certificate(gs, 2, 3, seed))
        rng = random.Random(seed)
        for _ in range(100):
            pt = (Fraction(rng.randint(0, 64), 64), Fraction(rng.randint(64, 640), 64))
            assert gs.holds_at(pt)
            assert naive_eval(f, pt) >= 0

    @settings(max_examples=50)
    @given(st.integers(0, 10 ** 6), st.sampled_from([MODULE, PREORDERING]))
    def test_expand_matches_sympy(self, seed, kind):
        c = random_certificate(GeneratorSet((P("x - x^2", 3), P("z - x^2", 3), P("y", 3))), 2, 3, seed, kind=kind)
        assert same_poly(expand(c), cert_to_sympy(c))


class TestBuilderAndProduct:
    def test_merges_scaled_squares(self):
        b = CertBuilder(two_gens())
        b.add((0, 0), 1, P("2x + 2", 2)).add((0, 0), 3, P("-x - 1", 2))
        c = b.build()
        assert c.terms == (((0, 0), SOS(((Fraction(7), P("x + 1", 2)),))),)

    @settings(max_examples=50)
    @given(st.integers(0, 10 ** 6), st.integers(0, 10 ** 6))
    def test_multiply_expands_to_product(self, s1, s2):
        gs = two_gens()
        a = random_certificate(gs, 2, 2, s1)
        b = random_certificate(gs, 2, 2, s2)
        assert expand(multiply(a, b)) == expand(a) * expand(b)


class TestJSON:
    def test_format(self):
        d = certificate_to_dict(strip_square_shape())
        assert d == {
            "variables": 2,
            "generators": ["-x^2 + x"],
            "kind": "preordering",
            "terms": [
                {"exponent": [0], "sos": [{"coeff": "1", "square": "y"}]},
                {"exponent": [1], "sos": [{"coeff": "1", "square": "1"}]},
            ],
        }

    @given(st.integers(0, 10 ** 6), st.sampled_from([MODULE, PREORDERING]))
    def test_round_trip(self, seed, kind):
        c = random_certificate(two_gens(), 3, 3, seed, kind=kind)
        text = dumps(c)
        assert loads(text) == c
        assert dumps(loads(text)) == text

    def test_module_rule_checked_on_load(self):
        d = certificate_to_dict(Certificate(two_gens(), (((1, 1), SOS.of(ONE2)),)))
        d["kind"] = "module"
        with pytest.raises(CertificateError):
            certificate_from_dict(d)

    def test_malformed(self):
        with pytest.raises(CertificateError, match="line 1"):
            loads("{not json")
        with pytest.raises(CertificateError):
            loads('{"variables": 1}')


def test_mutants_rejected():
    rng = random.Random(2024)
    gs = GeneratorSet((P("x - x^2", 2), P("y - x", 2), P("y^2 - x", 2)))
    tried = false_accepts = 0
    while tried < 1000:
        c = random_certificate(gs, 3, 3, rng.randrange(10 ** 9))
        f = expand(c)
        m = mutate(c, rng)
        if m is None or not expansions_differ(c, m, 2, rng):
            continue
        tried += 1
        if verify(m, f):
            false_accepts += 1
    assert false_accepts == 0
