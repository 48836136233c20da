"""
Certificates for quadratic modules and preorderings.

A certificate over generators ``s_1, ..., s_m`` is a finite sum

    sum_e  SOS_e * s_1^e_1 * ... * s_m^e_m,      e in {0,1}^m

where each ``SOS_e`` is stored as explicit pairs ``(c, h)`` meaning ``c*h^2``
with ``c > 0`` rational.  ``kind == "module"`` restricts every exponent vector
to at most one nonzero entry.  Verification is exact expansion and
coefficient comparison: no PSD test, no floating point.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import ArityError, CertificateError
from .poly import Poly, format_rational, parse_poly, parse_rational

__all__ = [
    "GeneratorSet", "SOS", "Certificate", "Verdict", "MODULE", "PREORDERING",
    "expand", "verify", "to_preordering", "multiply", "random_certificate",
    "certificate_to_dict", "certificate_from_dict", "dumps", "loads",
    "CertBuilder",
]

MODULE = "module"
PREORDERING = "preordering"


@dataclass(frozen=True)
class GeneratorSet:
    gens: tuple
    label: str = field(default="", compare=False)
    natural_for: Optional[object] = field(default=None, compare=False)

    def __post_init__(self):
        gens = tuple(self.gens)
        if not gens:
            raise CertificateError("a generator set needs at least one generator")
        if any(g.is_zero() for g in gens):
            raise CertificateError("generators must be nonzero")
        if len({g.nvars for g in gens}) != 1:
            raise ArityError("generators have different arities")
        object.__setattr__(self, "gens", gens)

    @property
    def nvars(self) -> int:
        return self.gens[0].nvars

    def __len__(self) -> int:
        return len(self.gens)

    def embed(self, nvars: int) -> "GeneratorSet":
        return GeneratorSet(tuple(g.embed(nvars) for g in self.gens), self.label, self.natural_for)

    def holds_at(self, point: Sequence) -> bool:
        return all(g(*point) >= 0 for g in self.gens)

    def __str__(self) -> str:
        return "; ".join(str(g) for g in self.gens)


@dataclass(frozen=True)
class SOS:
    """``sum c_i * h_i^2`` with every ``c_i > 0``; the empty sum is zero."""

    terms: tuple = ()

    def __post_init__(self):
        terms = tuple((Fraction(c), h) for c, h in self.terms)
        for c, h in terms:
            if c <= 0:
                raise CertificateError(f"SOS coefficients must be positive, got {c}")
        if len({h.nvars for _, h in terms}) > 1:
            raise ArityError("SOS squares have different arities")
        object.__setattr__(self, "terms", terms)

    @classmethod
    def of(cls, *squares: Poly) -> "SOS":
        return cls(tuple((Fraction(1), h) for h in squares))

    @property
    def squares(self) -> list:
        return [h for _, h in self.terms]

    def expand(self, nvars: int) -> Poly:
        out = Poly.zero(nvars)
        for c, h in self.terms:
            if h.nvars != nvars:
                raise ArityError(f"square {h} has arity {h.nvars}, expected {nvars}")
            out = out + (h * h) * c
        return out


@dataclass(frozen=True)
class Certificate:
    genset: GeneratorSet
    terms: tuple
    kind: str = PREORDERING

    def __post_init__(self):
        if self.kind not in (MODULE, PREORDERING):
            raise CertificateError(f"unknown certificate kind {self.kind!r}")
        m = len(self.genset)
        terms = []
        for e, sos in self.terms:
            e = tuple(int(v) for v in e)
            if len(e) != m or any(v not in (0, 1) for v in e):
                raise CertificateError(f"exponent {e} is not a 0/1 vector of length {m}")
            if self.kind == MODULE and sum(e) > 1:
                raise CertificateError(f"module certificate term {e} uses more than one generator")
            if not isinstance(sos, SOS):
                sos = SOS(sos)
            for _, h in sos.terms:
                if h.nvars != self.genset.nvars:
                    raise ArityError(f"square {h} does not match generator arity {self.genset.nvars}")
            terms.append((e, sos))
        object.__setattr__(self, "terms", tuple(terms))

    @property
    def nvars(self) -> int:
        return self.genset.nvars


@dataclass(frozen=True)
class Verdict:
    accepted: bool
    monomial: Optional[tuple] = None
    certificate_coeff: Optional[Fraction] = None
    target_coeff: Optional[Fraction] = None

    def __bool__(self) -> bool:
        return self.accepted

    def describe(self) -> str:
        if self.accepted:
            return "accept"
        return (f"reject at monomial {_mono_text(self.monomial)}: certificate has "
                f"{format_rational(self.certificate_coeff)}, target has {format_rational(self.target_coeff)}")

    def to_dict(self) -> dict:
        if self.accepted:
            return {"verdict": "accept"}
        return {
            "verdict": "reject",
            "monomial": _mono_text(self.monomial),
            "exponent": list(self.monomial),
            "certificate_coeff": format_rational(self.certificate_coeff),
            "target_coeff": format_rational(self.target_coeff),
        }


def _mono_text(m: tuple) -> str:
    return str(Poly({m: 1}, len(m)))


# ----------------------------------------------------------------------
# expansion and verification


def _gen_product(genset: GeneratorSet, e: tuple, cache: dict) -> Poly:
    if e not in cache:
        p = Poly.constant(1, genset.nvars)
        for g, bit in zip(genset.gens, e):
            if bit:
                p = p * g
        cache[e] = p
    return cache[e]


def expand(c: Certificate) -> Poly:
    """The polynomial ``sum_e SOS_e * s^e`` represented by ``c``."""
    acc: dict = {}
    cache: dict = {}
    n = c.nvars
    for e, sos in c.terms:
        if not sos.terms:
            continue
        term = sos.expand(n) * _gen_product(c.genset, e, cache)
        for m, v in term.terms.items():
            acc[m] = acc.get(m, 0) + v
    return Poly({m: v for m, v in acc.items() if v}, n)


def verify(c: Certificate, f: Poly) -> Verdict:
    """Accept iff ``expand(c) == f`` coefficient by coefficient."""
    if f.nvars != c.nvars:
        raise ArityError(f"target has arity {f.nvars}, certificate has {c.nvars}")
    got = expand(c)
    if got == f:
        return Verdict(True)
    monos = set(got.terms) | set(f.terms)
    for m in sorted(monos, key=lambda m: (sum(m), m), reverse=True):
        a, b = got.coeff(m), f.coeff(m)
        if a != b:
            return Verdict(False, m, a, b)
    raise AssertionError("unequal polynomials with identical coefficients")


def to_preordering(c: Certificate) -> Certificate:
    if c.kind == PREORDERING:
        return c
    return Certificate(c.genset, c.terms, PREORDERING)


# ----------------------------------------------------------------------
# building and multiplying


class CertBuilder:
    """Accumulates ``coeff * square^2 * s^e`` terms, merging equal squares.

    Squares are normalised to leading coefficient 1 (the scale moves into
    the positive coefficient), so ``h`` and ``-h`` and ``2h`` share a slot.
    """

    def __init__(self, genset: GeneratorSet):
        self.genset = genset
        self.slots: dict = {}

    def add(self, e: Sequence[int], coeff, square: Poly) -> "CertBuilder":
        coeff = Fraction(coeff)
        if coeff < 0:
            raise CertificateError("SOS coefficient must be non-negative")
        if not coeff or square.is_zero():
            return self
        lam, h = square.scale_to_monic()
        slot = self.slots.setdefault(tuple(e), {})
        slot[h] = slot.get(h, 0) + coeff * lam * lam
        return self

    def add_sos(self, e: Sequence[int], sos: SOS, scale=1, times: Optional[Poly] = None) -> "CertBuilder":
        for c, h in sos.terms:
            self.add(e, c * Fraction(scale), h if times is None else h * times)
        return self

    def add_certificate(self, c: Certificate, scale=1) -> "CertBuilder":
        for e, sos in c.terms:
            self.add_sos(e, sos, scale)
        return self

    def build(self, kind: str = PREORDERING) -> Certificate:
        terms = []
        for e in sorted(self.slots):
            slot = self.slots[e]
            pairs = sorted(((c, h) for h, c in slot.items()), key=lambda t: (-t[1].degree(), t[1].to_text()))
            if pairs:
                terms.append((e, SOS(tuple(pairs))))
        return Certificate(self.genset, tuple(terms), kind)


def multiply(a: Certificate, b: Certificate) -> Certificate:
    """Product of two certificates over the same generators.

    Exponents add; any ``s_i^2`` is absorbed into the squares as ``(h*s_i)^2``.
    """
    if a.genset.gens != b.genset.gens:
        raise CertificateError("certificates use different generator sets")
    gens = a.genset.gens
    out = CertBuilder(a.genset)
    for ea, sa in a.terms:
        for eb, sb in b.terms:
            e = tuple((x + y) % 2 for x, y in zip(ea, eb))
            extra = Poly.constant(1, a.nvars)
            for g, x, y in zip(gens, ea, eb):
                if x and y:
                    extra = extra * g
            for ca, ha in sa.terms:
                for cb, hb in sb.terms:
                    out.add(e, ca * cb, ha * hb * extra)
    return out.build(PREORDERING)


# ----------------------------------------------------------------------
# random fixtures


def _random_rational(rng: random.Random, span: int = 5, max_den: int = 4) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.randint(1, max_den))


def random_poly(rng: random.Random, nvars: int, degree: int, max_terms: int = 4) -> Poly:
    """A nonzero polynomial of total degree at most ``degree``."""
    monos = [m for m in _monomials(nvars, degree)]
    while True:
        terms = {}
        for _ in range(rng.randint(1, max_terms)):
            terms[rng.choice(monos)] = _random_rational(rng)
        p = Poly(terms, nvars)
        if not p.is_zero():
            return p


def _monomials(nvars: int, degree: int) -> Iterable[tuple]:
    if nvars == 1:
        for d in range(degree + 1):
            yield (d,)
        return
    for d in range(degree + 1):
        for rest in _monomials(nvars - 1, degree - d):
            yield (d,) + rest


def random_certificate(genset: GeneratorSet, degree_bound: int, term_count: int, seed: int,
                       kind: str = PREORDERING, max_squares: int = 2) -> Certificate:
    """A reproducible certificate; its expansion is non-negative on K_S by construction."""
    if degree_bound <= 0 or term_count <= 0:
        raise ValueError("bounds must be positive")
    rng = random.Random(seed)
    m = len(genset)
    terms = []
    for _ in range(term_count):
        if kind == MODULE:
            e = [0] * m
            k = rng.randint(0, m)
            if k < m:
                e[k] = 1
        else:
            e = [rng.randint(0, 1) for _ in range(m)]
        pairs = []
        for _ in range(rng.randint(1, max_squares)):
            pairs.append((Fraction(rng.randint(1, 5), rng.randint(1, 4)),
                          random_poly(rng, genset.nvars, rng.randint(0, degree_bound))))
        terms.append((tuple(e), SOS(tuple(pairs))))
    return Certificate(genset, tuple(terms), kind)


# ----------------------------------------------------------------------
# JSON


def certificate_to_dict(c: Certificate) -> dict:
    return {
        "variables": c.nvars,
        "generators": [str(g) for g in c.genset.gens],
        "kind": c.kind,
        "terms": [
            {
                "exponent": list(e),
                "sos": [{"coeff": format_rational(k), "square": str(h)} for k, h in sos.terms],
            }
            for e, sos in c.terms
        ],
    }


def certificate_from_dict(d: dict) -> Certificate:
    try:
        n = int(d["variables"])
        gens = tuple(parse_poly(g, n) for g in d["generators"])
        terms = []
        for t in d["terms"]:
            pairs = tuple((parse_rational(s["coeff"]), parse_poly(s["square"], n)) for s in t["sos"])
            terms.append((tuple(t["exponent"]), SOS(pairs)))
        return Certificate(GeneratorSet(gens), tuple(terms), d.get("kind", PREORDERING))
    except (KeyError, TypeError) as exc:
        raise CertificateError(f"malformed certificate JSON: {exc}") from exc


def dumps(c: Certificate) -> str:
    return json.dumps(certificate_to_dict(c), indent=2) + "\n"


def loads(text: str) -> Certificate:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CertificateError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return certificate_from_dict(data)
