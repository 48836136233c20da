"""Certificate-to-certificate transformations between strips, half-strips and related sets.

Every public transform re-verifies its output against the polynomial it
claims to certify before returning.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .certificate import (
    CertBuilder, Certificate, GeneratorSet, SOS, expand, verify,
)
from .errors import (
    ArityError, CertificateError, ConstructionError, NegativeOnSetError, NotDivisibleError,
    PreconditionError,
)
from .poly import Poly, compose, exact_divide, substitute
from .roots import IntervalUnion, decide_nonneg_on_U
from .saturate import natural_union

__all__ = [
    "ParitySplit", "embed_certificate", "parity_split", "halve_y_powers", "lift_halfstrip", "halfstrip_to_strip",
    "shift_halfstrip", "xy_cut_exponent", "xy_cut_lift", "xy_cut_transform", "surface_z_transform",
]


def embed_certificate(c: Certificate, nvars: int) -> Certificate:
    """The same certificate with generators and squares viewed in more variables."""
    terms = tuple((e, SOS(tuple((k, h.embed(nvars)) for k, h in sos.terms))) for e, sos in c.terms)
    return Certificate(c.genset.embed(nvars), terms, c.kind)


def _checked(cert: Certificate, target: Poly, what: str) -> Certificate:
    v = verify(cert, target)
    if not v:
        raise ConstructionError(f"{what}: output fails verification ({v.describe()})")
    return cert


# ----------------------------------------------------------------------
# half-strips


@dataclass(frozen=True)
class ParitySplit:
    """``h = even + y * odd_quotient`` with both parts even in ``y``."""

    even: Poly
    odd_quotient: Poly

    def symmetrized_square(self) -> Poly:
        y = Poly.var("y", self.even.nvars)
        return self.even * self.even + self.odd_quotient * self.odd_quotient * y * y


def parity_split(h: Poly) -> ParitySplit:
    if h.nvars < 2:
        raise ArityError("parity_split needs a polynomial in x and y")
    even, odd = {}, {}
    for m, c in h.terms.items():
        if m[1] % 2:
            odd[m[:1] + (m[1] - 1,) + m[2:]] = c
        else:
            even[m] = c
    split = ParitySplit(Poly(even, h.nvars), Poly(odd, h.nvars))
    y = Poly.var("y", h.nvars)
    flipped = substitute(h, "y", -y)
    if (h * h + flipped * flipped) / 2 != split.symmetrized_square():
        raise ConstructionError("parity identity failed")
    return split


def halve_y_powers(p: Poly) -> Poly:
    """``p'`` with ``p'(x, y^2) = p(x, y)``; ``p`` must be even in ``y``."""
    out = {}
    for m, c in p.terms.items():
        if m[1] % 2:
            raise PreconditionError(f"{p} has an odd power of y")
        out[m[:1] + (m[1] // 2,) + m[2:]] = c
    return Poly(out, p.nvars)


def _square_y(p: Poly) -> Poly:
    return Poly({m[:1] + (2 * m[1],) + m[2:]: c for m, c in p.terms.items()}, p.nvars)


def _strip_union(genset: GeneratorSet) -> IntervalUnion:
    U = natural_union(genset)
    if U is None:
        raise PreconditionError(f"generators {genset} are not the natural generators of an interval union")
    return U


def lift_halfstrip(c_strip: Certificate, U: Optional[IntervalUnion] = None) -> Certificate:
    """Turn a strip certificate of ``F(x, y)`` into a half-strip certificate of ``f``.

    ``f(x, y^2)`` is the even part of ``F`` in ``y``; when ``F = f(x, y^2)``
    this certifies ``f`` on ``U x [0, inf)`` over the natural generators and ``y``.
    """
    if c_strip.nvars == 1:
        c_strip = embed_certificate(c_strip, 2)
    if c_strip.nvars != 2:
        raise ArityError("strip certificates live in x and y")
    found = _strip_union(c_strip.genset)
    if U is not None and found != U:
        raise PreconditionError(f"certificate generators are natural for {found}, not {U}")
    y = Poly.var("y", 2)
    genset = GeneratorSet(c_strip.genset.gens + (y,), f"half-strip over {found}")
    out = CertBuilder(genset)
    for e, sos in c_strip.terms:
        for c, h in sos.terms:
            split = parity_split(h)
            out.add(e + (0,), c, halve_y_powers(split.even))
            out.add(e + (1,), c, halve_y_powers(split.odd_quotient))
    F = expand(c_strip)
    F_even = (F + substitute(F, "y", -y)) / 2
    target = halve_y_powers(F_even)
    return _checked(out.build(c_strip.kind), target, "half-strip lift")


def halfstrip_to_strip(c: Certificate) -> Certificate:
    """Substitute ``y -> y^2`` in a half-strip certificate, absorbing ``y`` into the squares."""
    if c.nvars != 2 or c.genset.gens[-1] != Poly.var("y", 2):
        raise PreconditionError("expected a certificate whose last generator is y")
    y = Poly.var("y", 2)
    genset = GeneratorSet(c.genset.gens[:-1], "strip")
    out = CertBuilder(genset)
    for e, sos in c.terms:
        for k, h in sos.terms:
            out.add(e[:-1], k, _square_y(h) * (y if e[-1] else 1))
    return _checked(out.build(c.kind), _square_y(expand(c)), "strip from half-strip")


def _shift(c: Certificate, q: Poly) -> Certificate:
    y = Poly.var("y", 2)
    image = y - q
    gens = tuple(substitute(g, "y", image) for g in c.genset.gens)
    out = CertBuilder(GeneratorSet(gens, f"shifted by {q}"))
    for e, sos in c.terms:
        for k, h in sos.terms:
            out.add(e, k, substitute(h, "y", image))
    return _checked(out.build(c.kind), substitute(expand(c), "y", image), "shift")


def shift_halfstrip(c: Certificate, q: Poly) -> Certificate:
    """Certificate of ``g(x, y - q(x))`` from one of ``g`` over ``{s_1..s_k, y}``.

    ``q`` must be non-negative on ``U``; otherwise :class:`NegativeOnSetError`.
    """
    if c.nvars != 2 or c.genset.gens[-1] != Poly.var("y", 2):
        raise PreconditionError("expected a half-strip certificate whose last generator is y")
    U = _strip_union(GeneratorSet(c.genset.gens[:-1]))
    if q.nvars == 2:
        if q.degree("y") > 0:
            raise PreconditionError("q must depend on x only")
        q1 = q.drop_last()
    else:
        q1 = q
    verdict = decide_nonneg_on_U(q1, U)
    if not verdict:
        raise NegativeOnSetError(verdict.witness, verdict.value,
                                 f"q = {q1} is negative on {U}: value {verdict.value} at x = {verdict.witness}")
    return _shift(c, q1.embed(2))


# ----------------------------------------------------------------------
# the region {0 <= x <= 1, xy >= 1}


def xy_cut_exponent(f: Poly) -> int:
    """Smallest ``n >= 0`` with ``x^(2n) f`` a polynomial in ``x`` and ``xy``."""
    deficit = max((m[1] - m[0] for m in f.terms), default=0)
    return max(0, -(-deficit // 2))


def xy_cut_lift(f: Poly, n: int) -> Poly:
    """``g(u, v) = u^(2n) f(u, v/u)``, so that ``g(x, xy) = x^(2n) f(x, y)``."""
    out = {}
    for (a, b), c in f.terms.items():
        e = a + 2 * n - b
        if e < 0:
            raise PreconditionError(f"x^{2 * n} * f is not a polynomial in x and xy (n too small)")
        out[(e, b)] = c
    return Poly(out, 2)


def xy_cut_transform(c: Certificate, n: int) -> Certificate:
    """Pull a certificate of ``g(u, v)`` over ``{u - u^2, v - 1}`` back to ``{x - x^2, xy - 1}``.

    The result certifies ``f = g(x, xy) / x^(2n)``; each square ``h(x, xy)``
    must be divisible by ``x^n``.  The terms are stored as
    ``s0 + s1 (xy-1) + (s2 + s3 (xy-1)) (x - x^2)``.
    """
    if n < 0:
        raise PreconditionError("n must be non-negative")
    if c.nvars != 2:
        raise ArityError("expected a certificate in two variables")
    x, y = Poly.var("x", 2), Poly.var("y", 2)
    strip, cut = x - x * x, y - 1
    gens = c.genset.gens
    if set(gens) != {strip, cut} or len(gens) != 2:
        raise PreconditionError(f"expected generators u - u^2 and v - 1, got {c.genset}")
    order = (0, 1) if gens[0] == strip else (1, 0)
    genset = GeneratorSet((x - x * x, x * y - 1), "0 <= x <= 1, xy >= 1")
    pull = {"x": x, "y": x * y}
    xn = x ** n
    out = CertBuilder(genset)
    for e, sos in c.terms:
        e_out = (e[order[0]], e[order[1]])
        for k, h in sos.terms:
            image = compose(h, pull)
            try:
                out.add(e_out, k, exact_divide(image, xn))
            except NotDivisibleError as exc:
                lead = exc.remainder.sorted_terms()[0][0]
                raise CertificateError(
                    f"square {h} of the term on exponent {list(e)} is not divisible by x^{n} after "
                    f"u = x, v = xy; residual monomial {Poly({lead: 1}, 2)}") from exc
    g_image = compose(expand(c), pull)
    try:
        target = exact_divide(g_image, x ** (2 * n))
    except NotDivisibleError as exc:
        raise CertificateError(f"g(x, xy) is not divisible by x^{2 * n}") from exc
    return _checked(out.build(c.kind), target, "xy-cut transform")


# ----------------------------------------------------------------------
# the surface z = x^2


def surface_z_transform(f: Poly, c_strip: Certificate) -> Certificate:
    """Certificate of ``f(x, y, z)`` over ``{1 - x^2, z - x^2, x^2 - z}``.

    ``c_strip`` must certify ``f(x, y, x^2)`` over ``{1 - x^2}``.  The part of
    ``f`` vanishing on ``z = x^2`` is ``h (z - x^2)``, which is split as
    ``((h+1)/2)^2 (z - x^2) + ((h-1)/2)^2 (x^2 - z)``.
    """
    if f.nvars != 3:
        raise ArityError("surface transform needs a polynomial in x, y, z")
    x2 = Poly.var("x", 2)
    if c_strip.nvars != 2 or c_strip.genset.gens != (1 - x2 * x2,):
        raise PreconditionError(f"expected a certificate over 1 - x^2, got {c_strip.genset}")
    x, z = Poly.var("x", 3), Poly.var("z", 3)
    on_surface = compose(f, {"z": x * x}).drop_last()
    v = verify(c_strip, on_surface)
    if not v:
        raise CertificateError(f"certificate does not expand to f(x, y, x^2): {v.describe()}")
    # h = sum_i g_i * (z^(i-1) + z^(i-2) x^2 + ... + x^(2(i-1)))
    coeffs: dict = {}
    for m, c in f.terms.items():
        coeffs.setdefault(m[2], {})[m[:2] + (0,)] = c
    h = Poly.zero(3)
    for i, terms in coeffs.items():
        if i == 0:
            continue
        g = Poly(terms, 3)
        geo = sum((z ** (i - 1 - j) * x ** (2 * j) for j in range(i)), Poly.zero(3))
        h = h + g * geo
    g_surface = on_surface.embed(3)
    if h * (z - x * x) != f - g_surface:
        raise ConstructionError("ideal part does not match f - f(x, y, x^2)")
    genset = GeneratorSet((1 - x * x, z - x * x, x * x - z), "1 - x^2, z = x^2")
    out = CertBuilder(genset)
    for e, sos in c_strip.terms:
        for k, sq in sos.terms:
            out.add(e + (0, 0), k, sq.embed(3))
    if not h.is_zero():
        out.add((0, 1, 0), Fraction(1, 4), h + 1)
        out.add((0, 0, 1), Fraction(1, 4), h - 1)
    return _checked(out.build(c_strip.kind), f, "surface transform")

