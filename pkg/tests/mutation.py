"""Single-coefficient mutants of valid certificates, with an independent truth oracle."""

import random
from fractions import Fraction

from oracles import naive_eval
from posicert import Certificate, GeneratorSet, Poly, SOS


def _perturb(p, rng):
    mono = rng.choice(sorted(p.terms)) if p.terms and rng.random() < 0.7 else \
        tuple(rng.randint(0, 2) for _ in range(p.nvars))
    delta = Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.randint(1, 5))
    terms = dict(p.terms)
    terms[mono] = terms.get(mono, 0) + delta
    return Poly(terms, p.nvars)


def mutate(cert, rng):
    """Perturb one coefficient of one square or of one generator used by some term."""
    used = sorted({i for e, sos in cert.terms if sos.terms for i, b in enumerate(e) if b})
    if used and rng.random() < 0.3:
        i = rng.choice(used)
        gens = list(cert.genset.gens)
        new = _perturb(gens[i], rng)
        if new.is_zero():
            return None
        gens[i] = new
        return Certificate(GeneratorSet(tuple(gens)), cert.terms, cert.kind)
    slots = [(t, j) for t, (_, sos) in enumerate(cert.terms) for j in range(len(sos.terms))]
    t, j = rng.choice(slots)
    e, sos = cert.terms[t]
    pairs = list(sos.terms)
    c, h = pairs[j]
    new = _perturb(h, rng)
    if new == -h:
        return None
    pairs[j] = (c, new)
    terms = list(cert.terms)
    terms[t] = (e, SOS(tuple(pairs)))
    return Certificate(cert.genset, tuple(terms), cert.kind)


def expansions_differ(a, b, nvars, rng, trials=6):
    """Point-evaluation oracle: distinct polynomials of low degree differ at some random point."""
    for _ in range(trials):
        pt = tuple(Fraction(rng.randint(-10 ** 6, 10 ** 6), rng.randint(1, 997)) for _ in range(nvars))
        if _eval_cert(a, pt) != _eval_cert(b, pt):
            return True
    return False


def _eval_cert(cert, pt):
    total = Fraction(0)
    for e, sos in cert.terms:
        mult = Fraction(1)
        for g, bit in zip(cert.genset.gens, e):
            if bit:
                mult *= naive_eval(g, pt)
        for c, h in sos.terms:
            total += c * naive_eval(h, pt) ** 2 * mult
    return total
