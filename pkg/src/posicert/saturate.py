"""
Constructive certificates for univariate polynomials non-negative on a
compact union of intervals ``U``.

The generators are the natural ones for ``U``::

    x - a1,  (x - a2)(x - b1),  ...,  (x - ak)(x - b_{k-1}),  bk - x

:func:`certify_nonneg_1d` factors ``f`` into a square part and linear /
quadratic sign-changing factors, certifies each factor (or pair of
factors) separately, and multiplies the pieces out.  Every returned
certificate has been re-verified against its target.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional

from .certificate import (
    MODULE, PREORDERING, CertBuilder, Certificate, GeneratorSet, SOS, multiply, verify,
)
from .errors import (
    CapabilityError, ConstructionError, NegativeOnSetError, PreconditionError,
)
from .poly import Poly
from .roots import (
    IntervalUnion, decide_nonneg_on_U, factor_low_degree, isolate_roots, odd_part,
)

__all__ = [
    "natural_generators", "natural_union", "lemma1_identities", "bcj_gap_certificate",
    "gap_quadratic_certificate", "certify_nonneg_1d", "module_form_single_interval",
]

X = Poly.var("x")


def natural_generators(U: IntervalUnion) -> GeneratorSet:
    ivs = U.intervals
    gens = [X - ivs[0][0]]
    for i in range(1, len(ivs)):
        gens.append((X - ivs[i][0]) * (X - ivs[i - 1][1]))
    gens.append(ivs[-1][1] - X)
    return GeneratorSet(tuple(gens), f"natural generators of {U}", natural_for=U)


def natural_union(genset: GeneratorSet) -> Optional[IntervalUnion]:
    """Recover ``U`` if ``genset`` is exactly the natural list for it (in x only)."""
    gens = list(genset.gens)
    try:
        while gens[0].nvars > 1:
            gens = [g.drop_last() for g in gens]
    except Exception:
        return None
    if len(gens) < 2:
        return None
    first, last = gens[0], gens[-1]
    if first.degree() != 1 or last.degree() != 1:
        return None
    if first.coeff((1,)) != 1 or last.coeff((1,)) != -1:
        return None
    a1, bk = -first.coeff((0,)), last.coeff((0,))
    ends = [a1]
    for g in gens[1:-1]:
        if g.degree() != 2 or g.coeff((2,)) != 1:
            return None
        s, p = -g.coeff((1,)), g.coeff((0,))
        disc = s * s - 4 * p
        if disc <= 0:
            return None
        root = _rational_sqrt(disc)
        if root is None:
            return None
        ends += [(s - root) / 2, (s + root) / 2]
    ends.append(bk)
    try:
        U = IntervalUnion(tuple((ends[i], ends[i + 1]) for i in range(0, len(ends), 2)))
    except PreconditionError:
        return None
    if natural_generators(U).gens != tuple(gens):
        return None
    return U


def _rational_sqrt(q: Fraction) -> Optional[Fraction]:
    from math import isqrt
    n, d = q.numerator, q.denominator
    if n < 0:
        return None
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def lemma1_identities(U: IntervalUnion) -> list:
    """The three closure identities, as module certificates over ``{x - a1, bk - x}``.

    With ``u = x - a1``, ``w = bk - x`` and ``L = bk - a1 > 0``:

    * ``u*w = (w^2 u + u^2 w) / L``
    * ``u   = u^2 / L + u*w / L``, the product rewritten by the first identity
    * ``w   = w^2 / L + u*w / L``, likewise

    For a point ``U = {a}`` the product is ``-u^2 = ((1-u)/2)^2 u + ((1+u)/2)^2 (-u)``
    and the two generators certify themselves.
    """
    a, b = U.lower, U.upper
    u, w = X - a, b - X
    one = Poly.constant(1)
    gs = GeneratorSet((u, w), "x - a1, bk - x")
    if a < b:
        inv = 1 / (b - a)
        specs = [
            (u * w, [((1, 0), inv, w), ((0, 1), inv, u)]),
            (u, [((0, 0), inv, u), ((1, 0), inv * inv, w), ((0, 1), inv * inv, u)]),
            (w, [((0, 0), inv, w), ((1, 0), inv * inv, w), ((0, 1), inv * inv, u)]),
        ]
    else:
        q = Fraction(1, 4)
        specs = [
            (u * w, [((1, 0), q, one - u), ((0, 1), q, one + u)]),
            (u, [((1, 0), 1, one)]),
            (w, [((0, 1), 1, one)]),
        ]
    out = []
    for target, terms in specs:
        b_ = CertBuilder(gs)
        for e, c, h in terms:
            b_.add(e, c, h)
        cert = _assert_verified(b_.build(MODULE), target)
        out.append((target, cert))
    return out


def _assert_verified(cert: Certificate, target: Poly) -> Certificate:
    v = verify(cert, target)
    if not v:
        raise ConstructionError(f"constructed certificate fails verification: {v.describe()}")
    return cert


# ----------------------------------------------------------------------
# gap pairs


def _gap_weight(S: Fraction, P: Fraction, b: Fraction, a: Fraction) -> Fraction:
    """A ``t`` in [0, 1] making ``x^2 - S x + P - t (x-b)(x-a)`` PSD."""
    def disc(t):
        return (S - t * (a + b)) ** 2 - 4 * (1 - t) * (P - t * a * b)

    A = (a - b) ** 2
    B = 4 * a * b + 4 * P - 2 * S * (a + b)
    t = min(max(-B / (2 * A), Fraction(0)), Fraction(1))
    if disc(t) <= 0:
        return t
    den = 2
    while den <= 2 ** 30:
        for j in range(den + 1):
            cand = Fraction(j, den)
            if disc(cand) <= 0:
                return cand
        den *= 2
    raise ConstructionError(f"no t in [0,1] certifies the pair (S={S}, P={P}) in gap [{b},{a}]")


def _gap_pieces(S, P, b, a) -> tuple:
    """``(t, residual SOS pairs)`` with ``x^2 - Sx + P = t (x-b)(x-a) + residual``."""
    t = _gap_weight(S, P, b, a)
    lead = 1 - t
    lin = -(S - t * (a + b))
    const = P - t * a * b
    pairs = []
    if lead:
        center = lin / (2 * lead)
        rest = const - lin * lin / (4 * lead)
        pairs.append((lead, X + center))
        if rest:
            pairs.append((rest, Poly.constant(1)))
    else:
        if lin:
            raise ConstructionError("linear residual in the gap construction")
        if const:
            pairs.append((const, Poly.constant(1)))
    if any(c < 0 for c, _ in pairs):
        raise ConstructionError("gap construction produced a non-PSD residual")
    return t, pairs


def _check_gap(b, a, lo, hi) -> None:
    if not b < a:
        raise PreconditionError(f"gap needs b < a, got [{b}, {a}]")
    if not (b <= lo and hi <= a):
        raise PreconditionError(f"roots must lie in the gap [{b}, {a}]")


def bcj_gap_certificate(r, s, b, a) -> Certificate:
    """Certificate for ``(x-r)(x-s)`` over the single generator ``(x-b)(x-a)``.

    Requires ``b <= r <= s <= a`` and ``b < a``.  The output has the shape
    ``(x-r)(x-s) = t (x-b)(x-a) + sigma0`` with ``0 <= t <= 1``.
    """
    r, s, b, a = (Fraction(v) for v in (r, s, b, a))
    if r > s:
        r, s = s, r
    _check_gap(b, a, r, s)
    return _gap_certificate(r + s, r * s, b, a)


def gap_quadratic_certificate(q: Poly, b, a) -> Certificate:
    """As :func:`bcj_gap_certificate` for a monic quadratic with both real roots in ``[b, a]``.

    Uses only the root sum and product, which are rational coefficients of ``q``.
    """
    b, a = Fraction(b), Fraction(a)
    if q.nvars != 1 or q.degree() != 2 or q.coeff((2,)) != 1:
        raise PreconditionError("expected a monic univariate quadratic")
    S, P = -q.coeff((1,)), q.coeff((0,))
    if S * S < 4 * P or q(b) < 0 or q(a) < 0 or not (b <= S / 2 <= a):
        raise PreconditionError(f"roots of {q} are not both real and inside [{b}, {a}]")
    _check_gap(b, a, b, a)
    return _gap_certificate(S, P, b, a)


def _gap_certificate(S, P, b, a) -> Certificate:
    gen = (X - b) * (X - a)
    t, pairs = _gap_pieces(S, P, b, a)
    terms = []
    if pairs:
        terms.append(((0,), SOS(tuple(pairs))))
    if t:
        terms.append(((1,), SOS(((t, Poly.constant(1)),))))
    cert = Certificate(GeneratorSet((gen,), f"gap [{b},{a}]"), tuple(terms), PREORDERING)
    return _assert_verified(cert, X * X - S * X + P)


# ----------------------------------------------------------------------
# the univariate construction


class _Pieces:
    """Factor certificates over the natural generators, multiplied at the end."""

    def __init__(self, G: GeneratorSet, U: IntervalUnion):
        self.G = G
        self.U = U
        self.m = len(G)
        self.certs = []

    def unit(self, e_index: Optional[int] = None) -> tuple:
        e = [0] * self.m
        if e_index is not None:
            e[e_index] = 1
        return tuple(e)

    def push(self, builder: CertBuilder, target: Poly) -> None:
        cert = builder.build()
        _assert_verified(cert, target)
        self.certs.append(cert)

    def linear_left(self, r: Fraction) -> None:
        # x - r = (x - a1) + (a1 - r) with r <= a1
        b = CertBuilder(self.G).add(self.unit(0), 1, Poly.constant(1))
        b.add(self.unit(), self.U.lower - r, Poly.constant(1))
        self.push(b, X - r)

    def linear_right(self, r: Fraction) -> None:
        # r - x = (bk - x) + (r - bk) with r >= bk
        b = CertBuilder(self.G).add(self.unit(self.m - 1), 1, Poly.constant(1))
        b.add(self.unit(), r - self.U.upper, Poly.constant(1))
        self.push(b, r - X)

    def gap_pair(self, S: Fraction, P: Fraction, gap: int) -> None:
        lo, hi = self.U.gaps()[gap - 1]
        t, pairs = _gap_pieces(S, P, lo, hi)
        b = CertBuilder(self.G)
        for c, h in pairs:
            b.add(self.unit(), c, h)
        b.add(self.unit(gap), t, Poly.constant(1))
        self.push(b, X * X - S * X + P)

    def psd_quadratic(self, q: Poly) -> None:
        p1, p0 = q.coeff((1,)), q.coeff((0,))
        b = CertBuilder(self.G).add(self.unit(), 1, X + p1 / 2)
        b.add(self.unit(), p0 - p1 * p1 / 4, Poly.constant(1))
        self.push(b, q)

    def quadratic_left(self, q: Poly) -> None:
        # q = (x-a1)^2 + (2a1 + p1)(x-a1) + q(a1), both roots below a1
        a1 = self.U.lower
        b = CertBuilder(self.G).add(self.unit(), 1, X - a1)
        b.add(self.unit(0), 2 * a1 + q.coeff((1,)), Poly.constant(1))
        b.add(self.unit(), q(a1), Poly.constant(1))
        self.push(b, q)

    def quadratic_right(self, q: Poly) -> None:
        # q = (bk-x)^2 - (2bk + p1)(bk-x) + q(bk), both roots above bk
        bk = self.U.upper
        b = CertBuilder(self.G).add(self.unit(), 1, bk - X)
        b.add(self.unit(self.m - 1), -(2 * bk + q.coeff((1,))), Poly.constant(1))
        b.add(self.unit(), q(bk), Poly.constant(1))
        self.push(b, q)

    def quadratic_straddle(self, q: Poly) -> None:
        # -q = (x-a1)(bk-x) + ell(x), ell linear and positive at a1 and bk
        a1, bk = self.U.lower, self.U.upper
        ell = -q - (X - a1) * (bk - X)
        e = [0] * self.m
        e[0] = e[-1] = 1
        b = CertBuilder(self.G).add(tuple(e), 1, Poly.constant(1))
        self._linear_nonneg(b, ell)
        self.push(b, -q)

    def _linear_nonneg(self, b: CertBuilder, ell: Poly) -> None:
        a1, bk = self.U.lower, self.U.upper
        if a1 < bk:
            width = bk - a1
            b.add(self.unit(self.m - 1), ell(a1) / width, Poly.constant(1))
            b.add(self.unit(0), ell(bk) / width, Poly.constant(1))
        else:
            slope = ell.coeff((1,))
            b.add(self.unit(), ell(a1), Poly.constant(1))
            b.add(self.unit(0 if slope > 0 else self.m - 1), abs(slope), Poly.constant(1))

    def product(self) -> Certificate:
        out = Certificate(self.G, ((self.unit(), SOS.of(Poly.constant(1))),), PREORDERING)
        for c in self.certs:
            out = multiply(out, c)
        return out


def _slot_of_rational(r: Fraction, U: IntervalUnion) -> tuple:
    """Admissible slots: 0 = left of U, j = gap j, k = right of U."""
    ivs = U.intervals
    k = len(ivs)
    if r < ivs[0][0]:
        return (0,)
    if r > ivs[-1][1]:
        return (k,)
    for j, (a, b) in enumerate(ivs, start=1):
        if a == b == r:
            return (j - 1, j)
        if r == a:
            return (j - 1,)
        if r == b:
            return (j,)
        if a < r < b:
            raise ConstructionError(f"sign-changing root {r} inside U")
        if j < k and b < r < ivs[j][0]:
            return (j,)
    raise ConstructionError(f"cannot place root {r}")


def _slot_of_irrational(iv, U: IntervalUnion) -> int:
    ivs = U.intervals
    if iv.compare(ivs[0][0]) < 0:
        return 0
    if iv.compare(ivs[-1][1]) > 0:
        return len(ivs)
    for j in range(1, len(ivs)):
        if iv.compare(ivs[j - 1][1]) > 0 and iv.compare(ivs[j][0]) < 0:
            return j
    raise ConstructionError("irrational sign-changing root inside U")


def _assign_point_roots(fixed: dict, ambiguous: list, k: int, positive: bool) -> Optional[dict]:
    """Place roots sitting on point components so every gap gets an even count.

    Slot 0 is unconstrained and slot ``k``'s parity is set by the sign of the
    leading unit, so working right to left each component's contribution to
    its right-hand slot is forced mod 2.
    """
    slots = {j: list(v) for j, v in fixed.items()}
    by_component: dict = {}
    for r, (_, j) in ambiguous:
        by_component.setdefault(j, []).append(r)
    carry = []
    for j in range(k, 0, -1):
        want = 0 if j < k or positive else 1
        slots[j] += carry
        roots = by_component.get(j, [])
        take = (len(slots[j]) - want) % 2
        if take > len(roots):
            return None
        slots[j] += roots[:take]
        carry = roots[take:]
    slots[0] += carry
    return slots


def certify_nonneg_1d(f: Poly, U: IntervalUnion, module_form: bool = False) -> Certificate:
    """Preordering certificate of ``f`` over the natural generators of ``U``.

    Raises :class:`NegativeOnSetError` (with a witness) if ``f`` is negative
    somewhere on ``U`` and :class:`CapabilityError` when the odd-multiplicity
    part of ``f`` has an irreducible factor of degree > 2, or irrational
    root pairs that cannot be paired with rational coefficients.
    """
    if f.nvars != 1:
        raise PreconditionError("certify_nonneg_1d needs a univariate polynomial")
    verdict = decide_nonneg_on_U(f, U)
    if not verdict:
        raise NegativeOnSetError(verdict.witness, verdict.value,
                                 f"{f} is negative on {U}: value {verdict.value} at x = {verdict.witness}")
    G = natural_generators(U)
    if f.is_zero():
        cert = Certificate(G, (), PREORDERING)
    else:
        cert = _certify(f, U, G)
    _assert_verified(cert, f)
    if module_form:
        if U.k != 1:
            raise CapabilityError("module-form conversion is only available for a single interval")
        cert = module_form_single_interval(cert)
    return cert


def _certify(f: Poly, U: IntervalUnion, G: GeneratorSet) -> Certificate:
    unit, odd, half = odd_part(f)
    fl = factor_low_degree(odd)
    if fl.unfactored:
        bad = fl.unfactored[0][0]
        raise CapabilityError(f"irreducible factor {bad} of degree {bad.degree()} > 2 in the odd part", bad)
    k = U.k
    pieces = _Pieces(G, U)
    sign = 1
    fixed: dict = {j: [] for j in range(k + 1)}
    ambiguous = []
    for g, _ in fl.factors:
        if g.degree() == 1:
            r = -g.coeff((0,))
            slots = _slot_of_rational(r, U)
            if len(slots) == 1:
                fixed[slots[0]].append(r)
            else:
                ambiguous.append((r, slots))
            continue
        p1, p0 = g.coeff((1,)), g.coeff((0,))
        if p1 * p1 < 4 * p0:
            pieces.psd_quadratic(g)
            continue
        lo_iv, hi_iv = isolate_roots(g)
        sa, sb = _slot_of_irrational(lo_iv, U), _slot_of_irrational(hi_iv, U)
        if sa == sb == 0:
            pieces.quadratic_left(g)
        elif sa == sb == k:
            pieces.quadratic_right(g)
        elif sa == 0 and sb == k:
            pieces.quadratic_straddle(g)
            sign = -sign
        elif sa == sb:
            lo, hi = U.gaps()[sa - 1]
            pieces.gap_pair(-p1, p0, sa)
        else:
            raise CapabilityError(
                f"the irrational roots of {g} fall in different parts of the complement of U; "
                "pairing them with other roots needs algebraic coefficients", g)
    plan = _assign_point_roots(fixed, ambiguous, k, sign * unit > 0)
    if plan is None:
        # borrow (x - c)^2 from the square part at point components for parity room
        extra = []
        for j, (a, b) in enumerate(U.intervals, start=1):
            if a == b and half(a) == 0:
                half = half / (X - a)
                extra += [(a, (j - 1, j))] * 2
        plan = _assign_point_roots(fixed, ambiguous + extra, k, sign * unit > 0)
        if plan is None:
            raise ConstructionError("no parity-consistent placement of roots at point components")
    fixed = plan
    for r in fixed[0]:
        pieces.linear_left(r)
    for r in fixed[k]:
        pieces.linear_right(r)
        sign = -sign
    for j in range(1, k):
        roots = sorted(fixed[j])
        if len(roots) % 2:
            raise ConstructionError(f"odd number of sign-changing roots in gap {j}")
        for r, s in zip(roots[::2], roots[1::2]):
            pieces.gap_pair(r + s, r * s, j)
    if sign * unit <= 0:
        raise ConstructionError("sign bookkeeping failed: leading unit has the wrong sign")
    prod = pieces.product()
    out = CertBuilder(G)
    scale = abs(unit)
    for e, sos in prod.terms:
        out.add_sos(e, sos, scale, times=half)
    return out.build(PREORDERING)


def module_form_single_interval(c: Certificate) -> Certificate:
    """Rewrite product terms of a single-interval certificate into module form."""
    U = natural_union(c.genset)
    if U is None or U.k != 1:
        raise PreconditionError("certificate is not over the natural generators of a single interval")
    a, b = U.lower, U.upper
    n = c.nvars
    one = Poly.constant(1, n)
    u = Poly.var("x", n) - a
    w = b - Poly.var("x", n)
    out = CertBuilder(c.genset)
    for e, sos in c.terms:
        if e != (1, 1):
            out.add_sos(e, sos)
        elif a < b:
            # (x-a)(b-x) = ((b-x)^2 (x-a) + (x-a)^2 (b-x)) / (b-a)
            out.add_sos((1, 0), sos, 1 / (b - a), times=w)
            out.add_sos((0, 1), sos, 1 / (b - a), times=u)
        else:
            # (x-a)(a-x) = -u^2 = ((1-u)/2)^2 u + ((1+u)/2)^2 (-u)
            out.add_sos((1, 0), sos, Fraction(1, 4), times=one - u)
            out.add_sos((0, 1), sos, Fraction(1, 4), times=one + u)
    cert = out.build(MODULE)
    from .certificate import expand
    _assert_verified(cert, expand(c))
    return cert
