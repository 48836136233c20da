"""Hypothesis strategies shared across the test modules."""

from fractions import Fraction

from hypothesis import strategies as st

from posicert import IntervalUnion, Poly

rationals = st.builds(Fraction, st.integers(-12, 12), st.integers(1, 6))
nonzero_rationals = rationals.filter(lambda q: q != 0)


def polys(nvars=1, max_degree=4, max_terms=5):
    mono = st.tuples(*[st.integers(0, max_degree)] * nvars)
    return st.dictionaries(mono, rationals, max_size=max_terms).map(lambda d: Poly(d, nvars))


def nonzero_polys(nvars=1, max_degree=4, max_terms=5):
    return polys(nvars, max_degree, max_terms).filter(lambda p: not p.is_zero())


@st.composite
def interval_unions(draw, max_k=3, allow_points=True):
    k = draw(st.integers(1, max_k))
    raw = draw(st.lists(st.builds(Fraction, st.integers(-16, 16), st.sampled_from([1, 2, 4])),
                        min_size=2 * k, max_size=2 * k, unique=True))
    pts = sorted(raw)
    ivs = []
    for i in range(k):
        a, b = pts[2 * i], pts[2 * i + 1]
        if allow_points and draw(st.booleans()) and draw(st.booleans()):
            b = a
        ivs.append((a, b))
    return IntervalUnion(tuple(ivs))
