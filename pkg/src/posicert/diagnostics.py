"""
Non-negativity refutation by sampling, and fiber analysis at fixed ``x``.

The fiber check tests a necessary condition for a finitely generated
preordering to be saturated: when the fiber ``{y : g_i(c, y) >= 0}`` is a
ray ``[l, inf)``, some ``g_i(c, y)`` must be a positive multiple of
``y - l``.  Failures at sampled ``c`` are evidence, never proof, and the
reports say so.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from .certificate import GeneratorSet
from .errors import ArityError, PreconditionError
from .poly import Poly, compose, format_rational
from .roots import IntervalUnion, IsolatingInterval, _dense, _poly, _sqf_part, isolate_roots, sturm_count

__all__ = [
    "Strip", "HalfStrip", "Custom", "Witness", "sample_refute_2d", "sample_points",
    "FiberInterval", "FiberSet", "fiber_set", "EndpointReport", "endpoint_generator_check",
    "ObstructionReport", "obstruction_scan", "dyadic_sequence",
    "HOLDS", "FAILS", "UNDECIDED", "DEFAULT_PRECISION_BITS",
]

HOLDS = "condition-holds"
FAILS = "condition-fails"
UNDECIDED = "undecided-at-precision"
DEFAULT_PRECISION_BITS = 64


# ----------------------------------------------------------------------
# deterministic dyadic sequences


def _van_der_corput(i: int) -> Fraction:
    num, den = 0, 1
    while i:
        i, bit = divmod(i, 2)
        num, den = 2 * num + bit, 2 * den
    return Fraction(num, den)


def _sobol2(i: int, bits: int = 32) -> Fraction:
    # second Sobol dimension: direction numbers v_k = v_{k-1} ^ (v_{k-1} >> 1)
    v = 1 << (bits - 1)
    acc = 0
    while i:
        if i & 1:
            acc ^= v
        i >>= 1
        v ^= v >> 1
    return Fraction(acc, 1 << bits)


def dyadic_sequence(count: int, start: int = 1) -> list:
    """``1/2, 1/4, 3/4, 1/8, ...``: the base-2 van der Corput points in (0, 1)."""
    return [_van_der_corput(i) for i in range(start, start + count)]


# ----------------------------------------------------------------------
# regions and refutation


@dataclass(frozen=True)
class Strip:
    U: IntervalUnion

    def contains(self, x: Fraction, y: Fraction) -> bool:
        return x in self.U

    def __str__(self) -> str:
        return f"strip {self.U} x R"


@dataclass(frozen=True)
class HalfStrip:
    """``{(x, y) : x in U, y >= q(x)}``."""

    U: IntervalUnion
    q: Poly = field(default_factory=Poly.zero)

    def contains(self, x: Fraction, y: Fraction) -> bool:
        return x in self.U and y >= self.q(x)

    def __str__(self) -> str:
        return f"half-strip {self.U}, y >= {self.q}"


@dataclass(frozen=True)
class Custom:
    genset: GeneratorSet
    radius: Fraction = Fraction(8)

    def contains(self, x: Fraction, y: Fraction) -> bool:
        return self.genset.embed(2).holds_at((x, y)) if self.genset.nvars == 1 else self.genset.holds_at((x, y))

    def __str__(self) -> str:
        return f"K_S for S = {self.genset}"


Region = Union[Strip, HalfStrip, Custom]


@dataclass(frozen=True)
class Witness:
    x: Fraction
    y: Fraction
    value: Fraction

    def to_dict(self) -> dict:
        return {"x": format_rational(self.x), "y": format_rational(self.y), "value": format_rational(self.value)}


def _point_in_union(U: IntervalUnion, u: Fraction, i: int) -> Fraction:
    total = sum(b - a for a, b in U.intervals)
    if total == 0:
        return U.intervals[i % U.k][0]
    pos = u * total
    for a, b in U.intervals:
        if pos <= b - a:
            return a + pos
        pos -= b - a
    return U.upper


def _probe(i: int) -> Fraction:
    # large |y| with alternating sign: +2^8, -2^12, +2^16, ... up to 2^64
    k = i // 8
    return Fraction((-1) ** (k + 1) * 2 ** (4 * (1 + (k - 1) % 16)))


def sample_points(region: Region, budget: int) -> list:
    """The deterministic sample list used by :func:`sample_refute_2d`."""
    pts = []
    if isinstance(region, Custom):
        R = region.radius
        i = 0
        while len(pts) < budget:
            i += 1
            x = R * (2 * _van_der_corput(i) - 1)
            y = R * (2 * _sobol2(i) - 1)
            if i % 8 == 0:
                y = _probe(i)
            pts.append((x, y))
        return pts
    U = region.U
    # endpoints first, each with a few y values
    for a, b in U.intervals:
        for x in dict.fromkeys((a, b)):
            for y in (Fraction(0), Fraction(1), Fraction(-1)):
                pts.append((x, y))
    i = 0
    while len(pts) < budget:
        i += 1
        x = _point_in_union(U, _van_der_corput(i), i)
        w = _sobol2(i)
        if i % 8 == 0:
            y = abs(_probe(i)) if isinstance(region, HalfStrip) else _probe(i)
        elif isinstance(region, HalfStrip):
            y = 8 * w
        else:
            y = 8 * (2 * w - 1)
        if isinstance(region, HalfStrip):
            y += region.q(x)
        pts.append((x, y))
    return pts[:budget]


def sample_refute_2d(f: Poly, region: Region, budget: int) -> Optional[Witness]:
    """A point of ``region`` where ``f < 0``, or ``None`` after ``budget`` samples.

    Every witness is checked by exact evaluation and exact membership.
    """
    if budget <= 0:
        raise PreconditionError("budget must be positive")
    if f.nvars == 1:
        f = f.embed(2)
    if f.nvars != 2:
        raise ArityError("sample_refute_2d needs a polynomial in x and y")
    for x, y in sample_points(region, budget):
        if not region.contains(x, y):
            continue
        v = f(x, y)
        if v < 0:
            return Witness(x, y, v)
    return None


# ----------------------------------------------------------------------
# fibers


@dataclass(frozen=True)
class FiberInterval:
    """A connected piece of a fiber; ``None`` endpoints are infinite."""

    lo: Optional[IsolatingInterval]
    hi: Optional[IsolatingInterval]
    lo_closed: bool = True
    hi_closed: bool = True

    def to_text(self) -> str:
        if self.lo is not None and self.hi is not None and self.lo == self.hi:
            return "{" + self.lo.to_text("y") + "}"
        left = "(-inf" if self.lo is None else ("[" if self.lo_closed else "(") + self.lo.to_text("y")
        right = "inf)" if self.hi is None else self.hi.to_text("y") + ("]" if self.hi_closed else ")")
        return f"{left}, {right}"


@dataclass(frozen=True)
class FiberSet:
    c: Fraction
    pieces: tuple
    constraints: tuple
    dropped: tuple = ()

    @property
    def is_empty(self) -> bool:
        return not self.pieces

    def ray_endpoint(self) -> Optional[IsolatingInterval]:
        """``l`` when the fiber is exactly ``[l, inf)``."""
        if len(self.pieces) == 1:
            p = self.pieces[0]
            if p.lo is not None and p.hi is None and p.lo_closed:
                return p.lo
        return None

    def to_text(self) -> str:
        return "empty" if self.is_empty else " u ".join(p.to_text() for p in self.pieces)

    def to_dict(self) -> dict:
        return {
            "c": format_rational(self.c),
            "fiber": self.to_text(),
            "constraints": [g.to_text(("y",)) for g in self.constraints],
            "dropped": list(self.dropped),
        }


def _as_xy(genset: GeneratorSet) -> tuple:
    if genset.nvars == 1:
        return genset.embed(2).gens
    if genset.nvars != 2:
        raise ArityError("fiber analysis needs generators in x and y")
    return genset.gens


def _at_x(g: Poly, c: Fraction) -> Poly:
    """``g(c, y)`` as a univariate polynomial (in the slot of ``x``)."""
    return Poly({(m[1],): v for m, v in compose(g, {"x": Poly.constant(c, 2)}).terms.items()}, 1)


def _separate(a: IsolatingInterval, b: IsolatingInterval) -> tuple:
    while a.hi >= b.lo and not (a.is_exact and b.is_exact):
        if a.is_exact or (not b.is_exact and b.width >= a.width):
            b = b.bisect()
        else:
            a = a.bisect()
    return a, b


def _sign_at(g: Poly, root: IsolatingInterval) -> int:
    """Sign of ``g`` at the root; ``g``'s roots are among those of ``root.poly``."""
    if root.is_exact:
        v = g(root.lo)
        return (v > 0) - (v < 0)
    # g vanishes at the root iff it vanishes at the unique root in (lo, hi]
    if sturm_count(g, root.lo, root.hi) > 0:
        return 0
    v = g(root.hi)
    return (v > 0) - (v < 0)


def _rename(root: IsolatingInterval, constraints: list) -> IsolatingInterval:
    """Describe an irrational endpoint by the square-free part of a constraint vanishing there."""
    if root.is_exact:
        return root
    for g in constraints:
        if _sign_at(g, root) == 0:
            return IsolatingInterval(root.lo, root.hi, _poly(_sqf_part(_dense(g))))
    return root


def fiber_set(S: GeneratorSet, c) -> FiberSet:
    """``{y : g_i(c, y) >= 0 for all i}`` as a union of intervals with exact or isolated endpoints."""
    c = Fraction(c)
    constraints, dropped = [], []
    for i, g in enumerate(_as_xy(S)):
        gc = _at_x(g, c)
        if gc.is_zero():
            dropped.append(f"generator {i + 1} ({g}) vanishes identically at x = {format_rational(c)}")
        elif gc.is_constant():
            if gc.constant_value() < 0:
                return FiberSet(c, (), (), tuple(dropped))
        else:
            constraints.append(gc)
    if not constraints:
        return FiberSet(c, (FiberInterval(None, None),), (), tuple(dropped))
    prod = Poly.constant(1)
    for g in constraints:
        prod = prod * g
    roots = isolate_roots(prod)
    for i in range(len(roots) - 1):
        roots[i], roots[i + 1] = _separate(roots[i], roots[i + 1])
    roots = [_rename(r, constraints) for r in roots]
    # cells: (-inf, r0), {r0}, (r0, r1), ..., {rn}, (rn, inf)
    def ok_at(y: Fraction) -> bool:
        return all(g(y) >= 0 for g in constraints)

    cells = []
    if not roots:
        cells.append(((None, None), ok_at(Fraction(0))))
    else:
        cells.append(((None, roots[0]), ok_at(roots[0].lo - 1)))
        for i, r in enumerate(roots):
            cells.append(((r, r), all(_sign_at(g, r) >= 0 for g in constraints)))
            if i + 1 < len(roots):
                mid = (r.hi + roots[i + 1].lo) / 2
                cells.append(((r, roots[i + 1]), ok_at(mid)))
        cells.append(((roots[-1], None), ok_at(roots[-1].hi + 1)))
    pieces = []
    cur = None
    for (lo, hi), good in cells:
        is_point = lo is not None and lo is hi
        if good:
            if cur is None:
                cur = [lo, hi, True if is_point else False, True if is_point else False]
                if lo is None:
                    cur[2] = False
            else:
                cur[1] = hi
                cur[3] = is_point
        elif cur is not None:
            pieces.append(FiberInterval(cur[0], cur[1], cur[2], cur[3]))
            cur = None
    if cur is not None:
        pieces.append(FiberInterval(cur[0], cur[1], cur[2], cur[3] if cur[1] is not None else False))
    return FiberSet(c, tuple(pieces), tuple(constraints), tuple(dropped))


# ----------------------------------------------------------------------
# the endpoint condition


@dataclass(frozen=True)
class EndpointReport:
    c: Fraction
    status: str
    endpoint: str
    candidates: tuple
    matching: Optional[str] = None

    def to_dict(self) -> dict:
        return {
            "c": format_rational(self.c),
            "status": self.status,
            "endpoint": self.endpoint,
            "candidates": list(self.candidates),
            "matching": self.matching,
        }


def _linear_matches(g: Poly, ell: IsolatingInterval, floor: Fraction) -> str:
    """Is ``g = r (y - l)`` with ``r > 0``?  Decided by refining ``l`` down to ``floor``."""
    if g.degree() != 1 or g.coeff((1,)) <= 0:
        return FAILS
    root = -g.coeff((0,)) / g.coeff((1,))
    iv = ell
    while True:
        if iv.is_exact:
            return HOLDS if iv.lo == root else FAILS
        if not (iv.lo < root <= iv.hi):
            return FAILS
        if iv.width <= floor:
            return UNDECIDED
        iv = iv.bisect()


def endpoint_generator_check(S: GeneratorSet, c, precision_bits: int = DEFAULT_PRECISION_BITS) -> EndpointReport:
    """Check whether some ``g_i(c, y)`` is a positive multiple of ``y - l`` for the fiber ``[l, inf)``."""
    c = Fraction(c)
    fs = fiber_set(S, c)
    ell = fs.ray_endpoint()
    if ell is None:
        raise PreconditionError(f"fiber at x = {format_rational(c)} is {fs.to_text()}, not a closed ray [l, inf)")
    floor = Fraction(1, 2 ** precision_bits)
    if not ell.is_exact:
        # compare against l isolated by its own polynomial, not the product of all constraints
        index = sturm_count(ell.poly, None, ell.lo)
        ell = isolate_roots(ell.poly)[index]
    cands = tuple(_at_x(g, c) for g in _as_xy(S))
    status = FAILS
    matching = None
    for g in cands:
        r = _linear_matches(g, ell, floor)
        if r == HOLDS:
            status, matching = HOLDS, g.to_text(("y",))
            break
        if r == UNDECIDED:
            status = UNDECIDED
    return EndpointReport(c, status, ell.to_text("y"), tuple(g.to_text(("y",)) for g in cands), matching)


@dataclass(frozen=True)
class ObstructionReport:
    samples: int
    applicable: int
    holds: int
    fails: int
    undecided: int
    per_sample: tuple
    note: str

    @property
    def failure_fraction(self) -> Optional[Fraction]:
        return Fraction(self.fails, self.applicable) if self.applicable else None

    def to_dict(self) -> dict:
        frac = self.failure_fraction
        return {
            "samples": self.samples,
            "applicable": self.applicable,
            "holds": self.holds,
            "fails": self.fails,
            "undecided": self.undecided,
            "failure_fraction": None if frac is None else format_rational(frac),
            "per_sample": list(self.per_sample),
            "note": self.note,
        }


_NOTE_BASE = ("The check is a necessary condition for saturation tested at finitely many x = c; "
              "a zero failure count proves nothing.")


def _interior_points(U: IntervalUnion, count: int) -> list:
    wide = [(a, b) for a, b in U.intervals if a < b]
    if not wide:
        return [U.intervals[i % U.k][0] for i in range(count)]
    sub = IntervalUnion(tuple(wide))
    out, i = [], 0
    while len(out) < count:
        i += 1
        c = _point_in_union(sub, _van_der_corput(i), i)
        if any(a < c < b for a, b in wide):
            out.append(c)
    return out


def obstruction_scan(S: GeneratorSet, U: IntervalUnion, samples: int,
                     precision_bits: int = DEFAULT_PRECISION_BITS) -> ObstructionReport:
    """Run :func:`endpoint_generator_check` at ``samples`` dyadic points of ``U``."""
    if samples <= 0:
        raise PreconditionError("samples must be positive")
    rows = []
    counts = {HOLDS: 0, FAILS: 0, UNDECIDED: 0}
    for c in _interior_points(U, samples):
        fs = fiber_set(S, c)
        if fs.ray_endpoint() is None:
            rows.append({"c": format_rational(c), "status": "not-applicable", "fiber": fs.to_text()})
            continue
        rep = endpoint_generator_check(S, c, precision_bits)
        counts[rep.status] += 1
        rows.append({"c": format_rational(c), "status": rep.status, "fiber": fs.to_text()})
    applicable = sum(counts.values())
    if not applicable:
        note = "No sampled fiber is a closed ray [l, inf), so the condition does not apply. " + _NOTE_BASE
    elif counts[FAILS]:
        note = ("Failures are consistent with non-saturation; the argument needs them at infinitely "
                "many c, so this is evidence only. " + _NOTE_BASE)
    else:
        note = _NOTE_BASE
    return ObstructionReport(samples, applicable, counts[HOLDS], counts[FAILS], counts[UNDECIDED],
                             tuple(rows), note)
