"""
Exact sparse polynomials over the rationals in one, two or three variables.

A :class:`Poly` stores a mapping from exponent tuples to nonzero
:class:`fractions.Fraction` coefficients.  The number of variables (the
arity) is fixed per value; the variables are always named ``x``, ``y``, ``z``
in that order.  Mixing arities raises :class:`ArityError`; promotion is
explicit through :meth:`Poly.embed`.

Text format::

    3/2*x^2*y - x + 1

``*`` may be omitted between factors, ``/`` divides by a constant, and
parentheses and integer powers are accepted by the parser.  The printer
always emits the expanded canonical form, so ``parse(str(p)) == p``.
"""

from __future__ import annotations

from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence, Union

from .errors import ArityError, NotDivisibleError, ParseError

VARS = ("x", "y", "z")
Monomial = tuple
Scalar = Union[int, Fraction]

__all__ = [
    "Poly", "VARS", "parse_poly", "parse_rational", "format_rational",
    "poly_arith", "exact_divide", "substitute", "compose", "coeff_in_y",
    "coeff_in_last", "evaluate",
]


def _var_index(var: Union[str, int], nvars: int) -> int:
    if isinstance(var, int):
        idx = var
    else:
        if var not in VARS:
            raise ArityError(f"unknown variable {var!r}")
        idx = VARS.index(var)
    if not 0 <= idx < nvars:
        raise ArityError(f"variable {var!r} not present in a ring with {nvars} variable(s)")
    return idx


class Poly:
    """Immutable sparse polynomial with rational coefficients."""

    __slots__ = ("_nvars", "_terms", "_hash")

    def __init__(self, terms: Mapping[Sequence[int], Scalar] | None = None, nvars: int = 1):
        if nvars not in (1, 2, 3):
            raise ArityError(f"arity must be 1, 2 or 3, got {nvars}")
        clean: dict = {}
        for mono, c in (terms or {}).items():
            mono = tuple(mono)
            if len(mono) != nvars or any((not isinstance(e, int)) or e < 0 for e in mono):
                raise ValueError(f"bad exponent {mono} for arity {nvars}")
            c = Fraction(c)
            if c:
                clean[mono] = clean.get(mono, 0) + c
        self._nvars = nvars
        self._terms = {m: c for m, c in clean.items() if c}
        self._hash = None

    @classmethod
    def _make(cls, terms: dict, nvars: int) -> "Poly":
        # trusted constructor: terms already canonical
        p = object.__new__(cls)
        p._nvars = nvars
        p._terms = terms
        p._hash = None
        return p

    # ------------------------------------------------------------------
    # constructors

    @classmethod
    def zero(cls, nvars: int = 1) -> "Poly":
        return cls._make({}, nvars)

    @classmethod
    def constant(cls, c: Scalar, nvars: int = 1) -> "Poly":
        c = Fraction(c)
        return cls._make({(0,) * nvars: c} if c else {}, nvars)

    @classmethod
    def var(cls, name: Union[str, int], nvars: int = 1) -> "Poly":
        idx = _var_index(name, nvars)
        mono = tuple(1 if i == idx else 0 for i in range(nvars))
        return cls._make({mono: Fraction(1)}, nvars)

    @classmethod
    def from_univariate(cls, coeffs: Iterable[Scalar], nvars: int = 1, var: Union[str, int] = 0) -> "Poly":
        """Build from coefficients listed low degree first, in variable ``var``."""
        idx = _var_index(var, nvars)
        terms = {}
        for e, c in enumerate(coeffs):
            c = Fraction(c)
            if c:
                terms[tuple(e if i == idx else 0 for i in range(nvars))] = c
        return cls._make(terms, nvars)

    # ------------------------------------------------------------------
    # inspection

    @property
    def nvars(self) -> int:
        return self._nvars

    @property
    def terms(self) -> Mapping[tuple, Fraction]:
        return MappingProxyType(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not any(m) for m in self._terms)

    def constant_value(self) -> Fraction:
        """Value of a constant polynomial; raises if not constant."""
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self._terms.get((0,) * self._nvars, Fraction(0))

    def coeff(self, mono: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(mono), Fraction(0))

    def degree(self, var: Union[str, int, None] = None) -> int:
        """Total degree, or degree in ``var``.  The zero polynomial has degree -1."""
        if not self._terms:
            return -1
        if var is None:
            return max(sum(m) for m in self._terms)
        idx = _var_index(var, self._nvars)
        return max(m[idx] for m in self._terms)

    def leading_coefficient(self) -> Fraction:
        """Leading coefficient of a univariate polynomial (0 for the zero polynomial)."""
        self._require_univariate()
        if not self._terms:
            return Fraction(0)
        return self._terms[(self.degree(),)]

    def sorted_terms(self) -> list:
        """Terms in canonical order: total degree descending, then lex descending."""
        return sorted(self._terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    def _require_univariate(self) -> None:
        if self._nvars != 1:
            raise ArityError("operation needs a univariate polynomial")

    # ------------------------------------------------------------------
    # arithmetic

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other._nvars != self._nvars:
                raise ArityError(f"arity mismatch: {self._nvars} vs {other._nvars}")
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.constant(other, self._nvars)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for m, c in other._terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Poly._make(out, self._nvars)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._make({m: -c for m, c in self._terms.items()}, self._nvars)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            if not other:
                return Poly.zero(self._nvars)
            return Poly._make({m: c * other for m, c in self._terms.items()}, self._nvars)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict = {}
        n = self._nvars
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = tuple(m1[i] + m2[i] for i in range(n))
                out[m] = out.get(m, 0) + c1 * c2
        return Poly._make({m: c for m, c in out.items() if c}, n)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError("division of a polynomial by zero")
            return self * (1 / Fraction(other))
        if isinstance(other, Poly):
            return exact_divide(self, other)
        return NotImplemented

    def __pow__(self, k: int) -> "Poly":
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Poly.constant(1, self._nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self._nvars == other._nvars and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._nvars, frozenset(self._terms.items())))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self._terms)

    # ------------------------------------------------------------------
    # evaluation and structure

    def __call__(self, *point: Scalar) -> Fraction:
        return evaluate(self, point)

    def embed(self, nvars: int) -> "Poly":
        """The same polynomial viewed in a ring with more variables."""
        if nvars < self._nvars:
            raise ArityError(f"cannot embed arity {self._nvars} into arity {nvars}")
        pad = (0,) * (nvars - self._nvars)
        return Poly._make({m + pad: c for m, c in self._terms.items()}, nvars)

    def drop_last(self) -> "Poly":
        """Reinterpret in one fewer variable; the last variable must not occur."""
        if self._nvars == 1:
            raise ArityError("cannot drop the only variable")
        if any(m[-1] for m in self._terms):
            raise ArityError(f"{self} depends on {VARS[self._nvars - 1]}")
        return Poly._make({m[:-1]: c for m, c in self._terms.items()}, self._nvars - 1)

    def diff(self, var: Union[str, int] = 0) -> "Poly":
        idx = _var_index(var, self._nvars)
        out = {}
        for m, c in self._terms.items():
            if m[idx]:
                mm = list(m)
                mm[idx] -= 1
                out[tuple(mm)] = c * m[idx]
        return Poly._make(out, self._nvars)

    def scale_to_monic(self) -> tuple:
        """Return ``(lam, q)`` with ``self == lam * q`` and the leading term of ``q`` equal to 1."""
        if not self._terms:
            return Fraction(0), self
        lam = self.sorted_terms()[0][1]
        return lam, self * (1 / lam)

    def to_text(self, names: Sequence[str] | None = None) -> str:
        names = names or VARS[: self._nvars]
        if not self._terms:
            return "0"
        pieces = []
        for i, (m, c) in enumerate(self.sorted_terms()):
            factors = []
            for name, e in zip(names, m):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            mag = abs(c)
            if not factors:
                body = format_rational(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = format_rational(mag) + "*" + "*".join(factors)
            if i == 0:
                pieces.append("-" + body if c < 0 else body)
            else:
                pieces.append(("- " if c < 0 else "+ ") + body)
        return " ".join(pieces)

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"Poly({self.to_text()!r}, nvars={self._nvars})"


# ----------------------------------------------------------------------
# rationals


def format_rational(c: Scalar) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad rational {text!r}", 0, text) from exc


# ----------------------------------------------------------------------
# parser


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, msg: str):
        raise ParseError(msg, self.pos, self.text)

    def skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def parse(self) -> Poly:
        if not self.peek():
            self.error("empty polynomial")
        p = self.expr()
        if self.peek():
            self.error(f"unexpected {self.peek()!r}")
        return p

    def expr(self) -> Poly:
        p = self.term()
        while self.peek() in ("+", "-"):
            op = self.text[self.pos]
            self.pos += 1
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self) -> Poly:
        p = self.factor()
        while True:
            ch = self.peek()
            if ch == "*":
                self.pos += 1
                p = p * self.factor()
            elif ch == "/":
                self.pos += 1
                at = self.pos
                q = self.factor()
                if not q.is_constant() or q.is_zero():
                    self.pos = at
                    self.error("division only by a nonzero constant")
                p = p * (1 / q.constant_value())
            elif ch and (ch.isdigit() or ch.isalpha() or ch == "(" or ch == "."):
                p = p * self.factor()
            else:
                return p

    def factor(self) -> Poly:
        ch = self.peek()
        if ch in ("+", "-"):
            self.pos += 1
            f = self.factor()
            return -f if ch == "-" else f
        base = self.base()
        if self.peek() == "^":
            self.pos += 1
            self.skip()
            start = self.pos
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            if start == self.pos:
                self.error("expected a non-negative integer exponent")
            base = base ** int(self.text[start:self.pos])
        return base

    def base(self) -> Poly:
        ch = self.peek()
        if ch == "(":
            self.pos += 1
            p = self.expr()
            if self.peek() != ")":
                self.error("expected ')'")
            self.pos += 1
            return p
        if ch.isdigit() or ch == ".":
            start = self.pos
            while self.pos < len(self.text) and (self.text[self.pos].isdigit() or self.text[self.pos] == "."):
                self.pos += 1
            try:
                return Poly.constant(Fraction(self.text[start:self.pos]), 3)
            except ValueError:
                self.pos = start
                self.error("bad number")
        if ch in VARS:
            self.pos += 1
            return Poly.var(ch, 3)
        if not ch:
            self.error("unexpected end of input")
        self.error(f"unexpected {ch!r}")


def parse_poly(text: str, nvars: int | None = None) -> Poly:
    """Parse the text format.  ``nvars`` defaults to the smallest arity covering the variables used."""
    p = _Parser(text).parse()
    used = max((i + 1 for m in p._terms for i in range(3) if m[i]), default=1)
    target = nvars if nvars is not None else used
    if target not in (1, 2, 3):
        raise ArityError(f"arity must be 1, 2 or 3, got {target}")
    if used > target:
        raise ArityError(f"{text!r} uses {VARS[used - 1]} but arity is {target}")
    return Poly._make({m[:target]: c for m, c in p._terms.items()}, target)


# ----------------------------------------------------------------------
# operations


def poly_arith(a: Poly, b: Poly, op: str) -> Poly:
    if a.nvars != b.nvars:
        raise ArityError(f"arity mismatch: {a.nvars} vs {b.nvars}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def exact_divide(num: Poly, den: Poly) -> Poly:
    """Return ``q`` with ``num == q * den`` or raise :class:`NotDivisibleError`.

    Lex-order division by a single polynomial; one polynomial is a Groebner
    basis of its ideal, so a nonzero remainder means ``den`` does not divide.
    """
    if num.nvars != den.nvars:
        raise ArityError(f"arity mismatch: {num.nvars} vs {den.nvars}")
    if den.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    n = num.nvars
    lead = max(den._terms)
    lc = den._terms[lead]
    rest = [(m, c) for m, c in den._terms.items() if m != lead]
    rem = dict(num._terms)
    quo: dict = {}
    out: dict = {}
    while rem:
        m = max(rem)
        c = rem.pop(m)
        if all(m[i] >= lead[i] for i in range(n)):
            qm = tuple(m[i] - lead[i] for i in range(n))
            qc = c / lc
            quo[qm] = quo.get(qm, 0) + qc
            for dm, dc in rest:
                k = tuple(qm[i] + dm[i] for i in range(n))
                v = rem.get(k, 0) - qc * dc
                if v:
                    rem[k] = v
                else:
                    rem.pop(k, None)
        else:
            out[m] = c
    quotient = Poly._make({m: c for m, c in quo.items() if c}, n)
    if out:
        raise NotDivisibleError(quotient, Poly._make(out, n))
    return quotient


def compose(p: Poly, mapping: Mapping[Union[str, int], Poly]) -> Poly:
    """Simultaneously substitute polynomials for variables of ``p``.

    All replacements share one arity, which becomes the arity of the result.
    Variables not in ``mapping`` map to themselves in the target ring.
    """
    images = {_var_index(k, p.nvars): v for k, v in mapping.items()}
    arities = {v.nvars for v in images.values()}
    if len(arities) > 1:
        raise ArityError("replacements have different arities")
    target = arities.pop() if arities else p.nvars
    for i in range(p.nvars):
        if i not in images:
            if i >= target:
                raise ArityError(f"variable {VARS[i]} has no image in arity {target}")
            images[i] = Poly.var(i, target)
    cache: dict = {}

    def power(i: int, e: int) -> Poly:
        key = (i, e)
        if key not in cache:
            cache[key] = images[i] ** e
        return cache[key]

    acc: dict = {}
    for m, c in p._terms.items():
        term = Poly.constant(c, target)
        for i, e in enumerate(m):
            if e:
                term = term * power(i, e)
        for tm, tc in term._terms.items():
            acc[tm] = acc.get(tm, 0) + tc
    return Poly._make({m: c for m, c in acc.items() if c}, target)


def substitute(p: Poly, var: Union[str, int], replacement: Poly) -> Poly:
    return compose(p, {var: replacement})


def coeff_in_last(p: Poly, i: int) -> Poly:
    """Coefficient of ``v^i`` where ``v`` is the last variable, as a polynomial in the others."""
    if p.nvars == 1:
        raise ArityError("needs at least two variables")
    return Poly._make({m[:-1]: c for m, c in p._terms.items() if m[-1] == i}, p.nvars - 1)


def coeff_in_y(p: Poly, i: int) -> Poly:
    """``a_i(x)`` in ``p = sum a_i(x) y^i`` for a bivariate ``p``."""
    if p.nvars != 2:
        raise ArityError("coeff_in_y needs a bivariate polynomial")
    return coeff_in_last(p, i)


def evaluate(p: Poly, point: Sequence[Scalar]) -> Fraction:
    if len(point) != p.nvars:
        raise ArityError(f"point has {len(point)} coordinates, polynomial has {p.nvars} variables")
    pt = [Fraction(v) for v in point]
    if p.nvars == 1:
        # Horner over the sparse exponents
        x = pt[0]
        items = sorted(((m[0], c) for m, c in p._terms.items()), reverse=True)
        acc = Fraction(0)
        prev = None
        for e, c in items:
            if prev is not None:
                acc *= x ** (prev - e)
            acc += c
            prev = e
        if prev:
            acc *= x ** prev
        return acc
    total = Fraction(0)
    for m, c in p._terms.items():
        v = c
        for xi, e in zip(pt, m):
            if e:
                v *= xi ** e
        total += v
    return total
