"""
Real roots of univariate rational polynomials, decided exactly.

Everything here works over :class:`fractions.Fraction`.  Internally the
univariate algorithms operate on dense coefficient lists (lowest degree
first); the public functions take and return :class:`~posicert.poly.Poly`.

Root isolation uses Sturm sequences and bisection at rational midpoints.
Rational roots are detected exactly: if the primitive integer form of a
square-free polynomial has leading coefficient ``L``, any rational root ``r``
satisfies ``L * r`` in ZZ, so shrinking an isolating interval below width
``1/L`` leaves at most one candidate to test.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional, Sequence

from .errors import PreconditionError
from .poly import Poly, format_rational, parse_rational

__all__ = [
    "IntervalUnion", "IsolatingInterval", "FactorList", "NonnegVerdict",
    "sturm_count", "isolate_roots", "square_free_decompose", "factor_low_degree",
    "decide_nonneg_on_U", "rational_roots",
]

Dense = list


# ----------------------------------------------------------------------
# dense helpers


def _dense(p: Poly) -> Dense:
    if p.nvars != 1:
        raise PreconditionError("expected a univariate polynomial")
    d = p.degree()
    out = [Fraction(0)] * (d + 1)
    for (e,), c in p.terms.items():
        out[e] = c
    return out


def _poly(c: Dense) -> Poly:
    return Poly.from_univariate(c)


def _trim(c: Dense) -> Dense:
    while c and not c[-1]:
        c.pop()
    return c


def _deg(c: Dense) -> int:
    return len(c) - 1


def _ev(c: Dense, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for a in reversed(c):
        acc = acc * x + a
    return acc


def _sign(v) -> int:
    return (v > 0) - (v < 0)


def _diff(c: Dense) -> Dense:
    return [c[i] * i for i in range(1, len(c))]


def _mul(a: Dense, b: Dense) -> Dense:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _divmod(a: Dense, b: Dense) -> tuple:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    db = _deg(b)
    lb = b[-1]
    q = [Fraction(0)] * max(len(a) - db, 0)
    while len(r) - 1 >= db and r:
        k = len(r) - 1 - db
        f = r[-1] / lb
        q[k] = f
        for i in range(db + 1):
            r[i + k] -= f * b[i]
        r.pop()
        _trim(r)
    return _trim(q), r


def _monic(c: Dense) -> Dense:
    lc = c[-1]
    return [a / lc for a in c]


def _gcd(a: Dense, b: Dense) -> Dense:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _divmod(a, b)[1]
    return _monic(a) if a else []


def _primitive_int(c: Dense) -> list:
    """Integer coefficients with content 1 and positive leading coefficient."""
    den = 1
    for a in c:
        den = den * a.denominator // math.gcd(den, a.denominator)
    ints = [int(a * den) for a in c]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    ints = [v // g for v in ints]
    if ints[-1] < 0:
        ints = [-v for v in ints]
    return ints


def _sqf_part(c: Dense) -> Dense:
    g = _gcd(c, _diff(c))
    if _deg(g) <= 0:
        return _monic(c)
    return _monic(_divmod(c, g)[0])


def _cauchy_bound(c: Dense) -> Fraction:
    """A power of two strictly exceeding every root's absolute value."""
    lc = abs(c[-1])
    m = max((abs(a) / lc for a in c[:-1]), default=Fraction(0))
    bound = 1 + m
    b = Fraction(1)
    while b <= bound:
        b *= 2
    return b


class _Sturm:
    """Sturm sequence of a square-free polynomial."""

    def __init__(self, sqf: Dense):
        seq = [sqf, _diff(sqf)]
        while seq[-1]:
            r = _divmod(seq[-2], seq[-1])[1]
            seq.append([-a for a in r])
        self.seq = [s for s in seq if s]
        self.poly = sqf

    def variations(self, x: Optional[Fraction], side: int = 0) -> int:
        # side=-1 / +1 means x = -inf / +inf
        if x is None:
            signs = [_sign(s[-1]) * (side if _deg(s) % 2 else 1) for s in self.seq]
        else:
            signs = [_sign(_ev(s, x)) for s in self.seq]
        signs = [s for s in signs if s]
        return sum(1 for a, b in zip(signs, signs[1:]) if a != b)

    def count(self, lo: Optional[Fraction], hi: Optional[Fraction]) -> int:
        """Distinct roots in ``(lo, hi]``; ``None`` means an infinite end."""
        if lo is not None and hi is not None and lo >= hi:
            return 0
        return self.variations(lo, -1) - self.variations(hi, 1)


# ----------------------------------------------------------------------
# data types


@dataclass(frozen=True)
class IntervalUnion:
    """A compact union ``[a1,b1] u ... u [ak,bk]`` with ``a1 <= b1 < a2 <= ...``."""

    intervals: tuple

    def __post_init__(self):
        ivs = tuple((Fraction(a), Fraction(b)) for a, b in self.intervals)
        if not ivs:
            raise PreconditionError("an interval union needs at least one interval")
        for i, (a, b) in enumerate(ivs):
            if a > b:
                raise PreconditionError(f"interval [{a},{b}] has a > b")
            if i and ivs[i - 1][1] >= a:
                raise PreconditionError("intervals must be ordered and disjoint (b_i < a_{i+1})")
        object.__setattr__(self, "intervals", ivs)

    @classmethod
    def parse(cls, text: str) -> "IntervalUnion":
        """Parse ``[0,1]u[2,3]``; ``{c}`` denotes a single point."""
        pieces = []
        for raw in text.replace("∪", "u").replace("U", "u").split("u"):
            raw = raw.strip()
            if not raw:
                continue
            if raw[0] == "{" and raw[-1] == "}":
                c = parse_rational(raw[1:-1])
                pieces.append((c, c))
            elif raw[0] == "[" and raw[-1] == "]" and raw.count(",") == 1:
                a, b = raw[1:-1].split(",")
                pieces.append((parse_rational(a), parse_rational(b)))
            else:
                raise PreconditionError(f"cannot parse interval {raw!r}")
        return cls(tuple(pieces))

    def __str__(self) -> str:
        return "u".join(f"[{format_rational(a)},{format_rational(b)}]" for a, b in self.intervals)

    def __contains__(self, x) -> bool:
        x = Fraction(x)
        return any(a <= x <= b for a, b in self.intervals)

    @property
    def k(self) -> int:
        return len(self.intervals)

    @property
    def lower(self) -> Fraction:
        return self.intervals[0][0]

    @property
    def upper(self) -> Fraction:
        return self.intervals[-1][1]

    def gaps(self) -> list:
        """The closed gaps ``[b_i, a_{i+1}]``."""
        return [(self.intervals[i][1], self.intervals[i + 1][0]) for i in range(self.k - 1)]


@dataclass(frozen=True)
class IsolatingInterval:
    """``poly`` (square-free) has exactly one real root in ``(lo, hi]``, or the root is ``lo == hi``."""

    lo: Fraction
    hi: Fraction
    poly: Poly

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def _sturm(self) -> _Sturm:
        return _Sturm(_dense(self.poly))

    def bisect(self) -> "IsolatingInterval":
        if self.is_exact:
            return self
        c = _dense(self.poly)
        mid = (self.lo + self.hi) / 2
        if not _ev(c, mid):
            return IsolatingInterval(mid, mid, self.poly)
        if _Sturm(c).count(self.lo, mid) == 1:
            return IsolatingInterval(self.lo, mid, self.poly)
        return IsolatingInterval(mid, self.hi, self.poly)

    def refine(self, width) -> "IsolatingInterval":
        """Narrow by bisection until the width is at most ``width``."""
        width = Fraction(width)
        if width <= 0:
            raise PreconditionError("refinement width must be positive")
        iv = self
        c = _dense(self.poly)
        st = _Sturm(c)
        lo, hi = iv.lo, iv.hi
        while hi - lo > width:
            mid = (lo + hi) / 2
            if not _ev(c, mid):
                return IsolatingInterval(mid, mid, self.poly)
            if st.count(lo, mid) == 1:
                hi = mid
            else:
                lo = mid
        return IsolatingInterval(lo, hi, self.poly)

    def compare(self, c) -> int:
        """Sign of ``root - c``, decided exactly."""
        c = Fraction(c)
        if self.is_exact:
            return _sign(self.lo - c)
        if c >= self.hi:
            # the root is never hi for a non-exact interval
            return -1 if c > self.hi or _ev(_dense(self.poly), c) else 0
        if c <= self.lo:
            return 1
        d = _dense(self.poly)
        if not _ev(d, c):
            return 0
        return -1 if _Sturm(d).count(self.lo, c) == 1 else 1

    def to_text(self, var: str = "x") -> str:
        if self.is_exact:
            return format_rational(self.lo)
        return f"root of {self.poly.to_text((var,))} in ({format_rational(self.lo)}, {format_rational(self.hi)}]"

    def __str__(self) -> str:
        return self.to_text()


@dataclass(frozen=True)
class FactorList:
    """``unit * prod(f**m for f, m in factors) * prod(g**m for g, m in unfactored)``."""

    unit: Fraction
    factors: tuple
    unfactored: tuple = ()

    @property
    def complete(self) -> bool:
        return not self.unfactored

    def product(self) -> Poly:
        out = Poly.constant(self.unit)
        for f, m in tuple(self.factors) + tuple(self.unfactored):
            out = out * f ** m
        return out


@dataclass(frozen=True)
class NonnegVerdict:
    nonneg: bool
    witness: Optional[Fraction] = None
    value: Optional[Fraction] = None

    def __bool__(self) -> bool:
        return self.nonneg


# ----------------------------------------------------------------------
# operations


def _require_nonzero(p: Poly) -> None:
    if p.nvars != 1:
        raise PreconditionError("expected a univariate polynomial")
    if p.is_zero():
        raise PreconditionError("the zero polynomial has no finite root set")


def sturm_count(p: Poly, lo=None, hi=None) -> int:
    """Number of distinct real roots of ``p`` in ``(lo, hi]``; ``None`` ends are infinite."""
    _require_nonzero(p)
    c = _dense(p)
    if _deg(c) == 0:
        return 0
    lo = None if lo is None else Fraction(lo)
    hi = None if hi is None else Fraction(hi)
    return _Sturm(_sqf_part(c)).count(lo, hi)


def _isolate_dense(sqf: Dense, lo: Optional[Fraction] = None, hi: Optional[Fraction] = None,
                   max_width: Fraction = Fraction(1)) -> list:
    """Isolating intervals for the roots of a square-free polynomial in ``(lo, hi]``."""
    if _deg(sqf) <= 0:
        return []
    st = _Sturm(sqf)
    bound = _cauchy_bound(sqf)
    lo = -bound if lo is None else max(lo, -bound)
    hi = bound if hi is None else min(hi, bound)
    if lo >= hi:
        return []
    ints = _primitive_int(sqf)
    lead = ints[-1]
    poly = _poly(sqf)
    out = []
    stack = [(lo, hi, st.count(lo, hi))]
    while stack:
        a, b, n = stack.pop()
        if n == 0:
            continue
        if n == 1:
            out.append(_finish(sqf, st, a, b, lead, poly, max_width))
            continue
        mid = (a + b) / 2
        left = st.count(a, mid)
        stack.append((mid, b, n - left))
        stack.append((a, mid, left))
    out.sort(key=lambda iv: iv.lo)
    return out


def _finish(sqf, st, a, b, lead, poly, max_width) -> IsolatingInterval:
    if not _ev(sqf, b):
        return IsolatingInterval(b, b, poly)
    target = min(max_width, Fraction(1, 2 * lead))
    while b - a > target:
        mid = (a + b) / 2
        if not _ev(sqf, mid):
            return IsolatingInterval(mid, mid, poly)
        if st.count(a, mid) == 1:
            b = mid
        else:
            a = mid
    # the only candidate rational root in (a, b] has the form n / lead
    n = math.floor(b * lead)
    if Fraction(n, lead) > a:
        r = Fraction(n, lead)
        if not _ev(sqf, r):
            return IsolatingInterval(r, r, poly)
    if b - a > max_width:
        return IsolatingInterval(a, b, poly).refine(max_width)
    return IsolatingInterval(a, b, poly)


def isolate_roots(p: Poly, max_width=1) -> list:
    """One isolating interval per distinct real root, sorted, width at most ``max_width``.

    Rational roots come back as exact degenerate intervals ``[r, r]``.
    """
    _require_nonzero(p)
    c = _dense(p)
    if _deg(c) == 0:
        return []
    return _isolate_dense(_sqf_part(c), max_width=Fraction(max_width))


def rational_roots(p: Poly) -> list:
    """All distinct rational roots, ascending."""
    return [iv.lo for iv in isolate_roots(p) if iv.is_exact]


def _yun(p: Poly) -> FactorList:
    """Yun's algorithm: ``p = unit * prod f_i^i`` with monic, square-free, pairwise coprime ``f_i``."""
    c = _dense(p)
    unit = c[-1]
    if _deg(c) == 0:
        return FactorList(unit, ())
    f = _monic(c)
    df = _diff(f)
    a = _gcd(f, df)
    b = _divmod(f, a)[0]
    cc = _divmod(df, a)[0]
    d = _trim([x - y for x, y in _zip_sub(cc, _diff(b))])
    factors = []
    i = 1
    while _deg(b) > 0:
        g = _gcd(b, d)
        if _deg(g) > 0:
            factors.append((_poly(g), i))
        b = _divmod(b, g)[0]
        cc = _divmod(d, g)[0]
        d = _trim([x - y for x, y in _zip_sub(cc, _diff(b))])
        i += 1
    return FactorList(unit, tuple(factors))


def _factor_key(fm) -> tuple:
    f, m = fm
    return (f.degree(), [f.coeff((i,)) for i in range(f.degree() + 1)], m)


def square_free_decompose(p: Poly) -> FactorList:
    """Square-free decomposition with exact rational roots split off as linear factors.

    Factors are monic, square-free and pairwise coprime; ``unit`` is the
    leading coefficient of ``p``.
    """
    _require_nonzero(p)
    out = []
    yun = _yun(p)
    for g, m in yun.factors:
        c = _dense(g)
        for r in rational_roots(g):
            lin = [-r, Fraction(1)]
            out.append((_poly(lin), m))
            c = _divmod(c, lin)[0]
        if _deg(c) > 0:
            out.append((_poly(c), m))
    out.sort(key=_factor_key)
    return FactorList(yun.unit, tuple(out))


def _zip_sub(a: Dense, b: Dense) -> Iterator:
    n = max(len(a), len(b))
    for i in range(n):
        yield (a[i] if i < len(a) else Fraction(0), b[i] if i < len(b) else Fraction(0))


def _divisors(n: int, limit: int = 10 ** 12) -> Optional[list]:
    n = abs(n)
    if n > limit:
        return None
    primes = {}
    m = n
    p = 2
    while p * p <= m:
        while m % p == 0:
            primes[p] = primes.get(p, 0) + 1
            m //= p
        p += 1 if p == 2 else 2
    if m > 1:
        primes[m] = primes.get(m, 0) + 1
    divs = [1]
    for pr, e in primes.items():
        divs = [d * pr ** k for d in divs for k in range(e + 1)]
    return sorted(divs)


def _ev_int(c: list, x: int) -> int:
    acc = 0
    for a in reversed(c):
        acc = acc * x + a
    return acc


def _quadratic_factor(c: Dense) -> Optional[Dense]:
    """A monic rational quadratic factor of ``c`` (no rational roots, degree >= 4), or None.

    Kronecker search: a factor ``A x^2 + B x + C`` in ZZ[x] of the primitive
    form takes values dividing ``c(x_i)`` at three integer points.
    """
    ints = _primitive_int(c)
    pts = sorted(range(-12, 13), key=lambda x: (abs(_ev_int(ints, x)), abs(x)))[:3]
    vals = [_ev_int(ints, x) for x in pts]
    divs = [_divisors(v) for v in vals]
    if any(d is None for d in divs):
        return None
    x0, x1, x2 = pts
    lead = ints[-1]
    for d0 in divs[0]:
        for d1 in divs[1]:
            for s1 in (1, -1):
                v1 = s1 * d1
                for d2 in divs[2]:
                    for s2 in (1, -1):
                        v2 = s2 * d2
                        # Lagrange interpolation through (x_i, v_i)
                        a = (Fraction(d0, (x0 - x1) * (x0 - x2)) + Fraction(v1, (x1 - x0) * (x1 - x2))
                             + Fraction(v2, (x2 - x0) * (x2 - x1)))
                        if not a or a.denominator != 1 or lead % int(a):
                            continue
                        b = (Fraction(v1 - d0, x1 - x0) - a * (x0 + x1))
                        if b.denominator != 1:
                            continue
                        cst = d0 - a * x0 * x0 - b * x0
                        if cst.denominator != 1 or not cst or ints[0] % int(cst):
                            continue
                        q = [cst, b, a]
                        rem = _divmod(c, q)[1]
                        if not rem:
                            return _monic(q)
    return None


def factor_low_degree(p: Poly, max_search_degree: int = 8) -> FactorList:
    """Factor into monic irreducibles over QQ when all of them have degree <= 2.

    Rational roots are peeled exactly; remaining parts of degree 4..8 are
    searched for rational quadratic factors.  Anything left is reported in
    ``unfactored`` rather than silently dropped.
    """
    sqf = square_free_decompose(p)
    factors = []
    unfactored = []
    for g, mult in sqf.factors:
        c = _dense(g)
        while _deg(c) > 0:
            if _deg(c) <= 2:
                factors.append((_poly(_monic(c)), mult))
                break
            q = _quadratic_factor(c) if _deg(c) <= max_search_degree and _deg(c) >= 4 else None
            if q is None:
                unfactored.append((_poly(_monic(c)), mult))
                break
            factors.append((_poly(q), mult))
            c = _divmod(c, q)[0]
    factors.sort(key=_factor_key)
    return FactorList(sqf.unit, tuple(factors), tuple(unfactored))


def odd_part(p: Poly) -> tuple:
    """``(unit, O, S)`` with ``p = unit * O * S**2``; ``O`` monic square-free holds the sign changes."""
    sqf = _yun(p)
    odd = [Fraction(1)]
    half = [Fraction(1)]
    for g, m in sqf.factors:
        gd = _dense(g)
        if m % 2:
            odd = _mul(odd, gd)
        for _ in range(m // 2):
            half = _mul(half, gd)
    return sqf.unit, _poly(odd), _poly(half)


def _nonzero_point(c: Dense, a: Fraction, b: Fraction) -> Fraction:
    """A rational in ``[a, b]`` (a < b) where ``c`` does not vanish."""
    k = 1
    while True:
        den = 2 ** k
        for j in range(1, den, 2):
            x = a + (b - a) * Fraction(j, den)
            if _ev(c, x):
                return x
        k += 1


def decide_nonneg_on_U(p: Poly, U: IntervalUnion) -> NonnegVerdict:
    """Exactly decide ``p >= 0`` on ``U``; on failure return a rational witness with ``p < 0``."""
    if p.nvars != 1:
        raise PreconditionError("expected a univariate polynomial")
    if p.is_zero():
        return NonnegVerdict(True)
    c = _dense(p)
    if _deg(c) == 0:
        if c[0] < 0:
            return NonnegVerdict(False, U.lower, c[0])
        return NonnegVerdict(True)
    unit, odd, _ = odd_part(p)
    od = _dense(odd)
    st = _Sturm(od) if _deg(od) > 0 else None
    sq = _sqf_part(c)
    for a, b in U.intervals:
        for end in (a, b):
            v = _ev(c, end)
            if v < 0:
                return NonnegVerdict(False, end, v)
        if a == b:
            continue
        crossings = 0 if st is None else st.count(a, b) - (1 if not _ev(od, b) else 0)
        if crossings == 0:
            x = _nonzero_point(c, a, b)
            v = _ev(c, x)
            if v < 0:
                return NonnegVerdict(False, x, v)
            continue
        # a sign change of p inside (a, b): find both sides of one crossing
        for iv in _isolate_dense(od, a, b):
            if iv.lo == iv.hi and iv.lo == b:
                continue
            w = _witness_near(c, sq, iv, a, b)
            return NonnegVerdict(False, w, _ev(c, w))
        raise AssertionError("sign change counted but not isolated")
    return NonnegVerdict(True)


def _witness_near(c: Dense, sq: Dense, iv: IsolatingInterval, a: Fraction, b: Fraction) -> Fraction:
    """Points just left and right of a sign-changing root; return the one where ``c < 0``."""
    st = _Sturm(sq)
    lo, hi = iv.lo, iv.hi
    if lo == hi:
        r = lo
        eps = min(r - a, b - r) / 2
        while st.count(r - eps, r + eps) != 1 or not _ev(c, r - eps) or not _ev(c, r + eps):
            eps /= 2
        lo, hi = r - eps, r + eps
    else:
        own = _Sturm(_dense(iv.poly))
        while st.count(lo, hi) != 1 or not _ev(c, lo) or not _ev(c, hi):
            mid = (lo + hi) / 2
            if not _ev(sq, mid):
                return _witness_near(c, sq, IsolatingInterval(mid, mid, iv.poly), a, b)
            if own.count(lo, mid) == 1:
                hi = mid
            else:
                lo = mid
    for x in (lo, hi):
        if _ev(c, x) < 0:
            return x
    raise AssertionError("no negative side next to a sign change")
