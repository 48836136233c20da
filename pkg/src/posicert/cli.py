"""Command-line interface.

Exit codes: 0 success or accept, 1 usage or malformed input, 2 semantic
rejection (verification failure, negativity witness, violated
precondition), 3 capability limit.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import Optional, Sequence

from . import __version__
from .certificate import (
    MODULE, PREORDERING, Certificate, GeneratorSet, certificate_to_dict, dumps, expand, loads,
    random_certificate, verify,
)
from .diagnostics import (
    DEFAULT_PRECISION_BITS, Custom, HalfStrip, Strip, endpoint_generator_check, fiber_set,
    obstruction_scan, sample_refute_2d,
)
from .errors import (
    ArityError, CapabilityError, CertificateError, NegativeOnSetError, ParseError, PosicertError,
    PreconditionError,
)
from .poly import Poly, format_rational, parse_poly, parse_rational
from .roots import IntervalUnion
from .saturate import certify_nonneg_1d, natural_generators
from .transforms import (
    embed_certificate, lift_halfstrip, shift_halfstrip, surface_z_transform, xy_cut_transform,
)

EXIT_OK, EXIT_USAGE, EXIT_REJECT, EXIT_CAPABILITY = 0, 1, 2, 3
PRECISION_ENV = "POSICERT_PRECISION_BITS"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ----------------------------------------------------------------------
# input helpers


def _read_text(path: Optional[str]) -> str:
    if path is None or path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc


def _read_cert(path: Optional[str]) -> Certificate:
    try:
        return loads(_read_text(path))
    except (CertificateError, ParseError, ArityError) as exc:
        raise UsageError(f"malformed certificate: {exc}") from exc


def _poly(text: str, nvars: Optional[int] = None) -> Poly:
    try:
        return parse_poly(text, nvars)
    except ParseError as exc:
        raise UsageError(f"cannot parse polynomial {text!r}: {exc}") from exc


def _gens(text: str, nvars: Optional[int] = None) -> GeneratorSet:
    parts = [p for p in text.split(";") if p.strip()]
    if not parts:
        raise UsageError("empty generator list")
    polys = [_poly(p) for p in parts]
    n = nvars or max(p.nvars for p in polys)
    return GeneratorSet(tuple(p.embed(n) if p.nvars < n else p for p in polys))


def _union(text: str) -> IntervalUnion:
    try:
        return IntervalUnion.parse(text)
    except (PreconditionError, ParseError) as exc:
        raise UsageError(f"cannot parse interval union {text!r}: {exc}") from exc


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ParseError as exc:
        raise UsageError(f"cannot parse rational {text!r}: {exc}") from exc


def _precision(args) -> int:
    if getattr(args, "precision_bits", None) is not None:
        return args.precision_bits
    env = os.environ.get(PRECISION_ENV)
    if env:
        try:
            bits = int(env)
        except ValueError as exc:
            raise UsageError(f"{PRECISION_ENV} must be an integer, got {env!r}") from exc
        if bits <= 0:
            raise UsageError(f"{PRECISION_ENV} must be positive")
        return bits
    return DEFAULT_PRECISION_BITS


# ----------------------------------------------------------------------
# output helpers


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def certificate_to_text(c: Certificate) -> str:
    lines = [f"generators: {c.genset}", f"kind: {c.kind}"]
    names = [f"s{i + 1}" for i in range(len(c.genset))]
    for e, sos in c.terms:
        mult = "*".join(n for n, b in zip(names, e) if b) or "1"
        squares = " + ".join(f"{format_rational(k)}*({h})^2" for k, h in sos.terms)
        lines.append(f"[{mult}] {squares}")
    return "\n".join(lines) + "\n"


def _emit_cert(c: Certificate, fmt: Optional[str]) -> None:
    sys.stdout.write(certificate_to_text(c) if fmt == "text" else dumps(c))


def _emit(obj: dict, text: str, fmt: Optional[str], default: str = "json") -> None:
    if (fmt or default) == "json":
        sys.stdout.write(_json(obj))
    else:
        sys.stdout.write(text.rstrip("\n") + "\n")


# ----------------------------------------------------------------------
# subcommands


def cmd_certify_1d(args) -> int:
    f = _poly(args.poly, 1)
    U = _union(args.set)
    c = certify_nonneg_1d(f, U, module_form=args.module_form)
    _emit_cert(c, args.format)
    return EXIT_OK


def cmd_verify(args) -> int:
    c = _read_cert(args.cert)
    f = _poly(args.poly, c.nvars)
    v = verify(c, f)
    _emit(v.to_dict(), v.describe(), args.format, default="text")
    return EXIT_OK if v else EXIT_REJECT


def cmd_expand(args) -> int:
    c = _read_cert(args.cert)
    p = expand(c)
    _emit({"variables": c.nvars, "polynomial": str(p)}, str(p), args.format, default="text")
    return EXIT_OK


def cmd_lift_halfstrip(args) -> int:
    c = _read_cert(args.cert)
    U = _union(args.set) if args.set else None
    _emit_cert(lift_halfstrip(c, U), args.format)
    return EXIT_OK


def cmd_shift(args) -> int:
    c = _read_cert(args.cert)
    q = _poly(args.q, 1)
    _emit_cert(shift_halfstrip(c, q), args.format)
    return EXIT_OK


def cmd_xycut(args) -> int:
    c = _read_cert(args.cert)
    if c.nvars == 1:
        c = embed_certificate(c, 2)
    _emit_cert(xy_cut_transform(c, args.n), args.format)
    return EXIT_OK


def cmd_surface_z(args) -> int:
    c = _read_cert(args.cert)
    if c.nvars == 1:
        c = embed_certificate(c, 2)
    f = _poly(args.poly, 3)
    _emit_cert(surface_z_transform(f, c), args.format)
    return EXIT_OK


def cmd_refute(args) -> int:
    f = _poly(args.poly, 2)
    if args.gens:
        region = Custom(_gens(args.gens, 2))
    elif args.set is None:
        raise UsageError("refute needs --set or --gens")
    elif args.q is not None:
        region = HalfStrip(_union(args.set), _poly(args.q, 1))
    else:
        region = Strip(_union(args.set))
    w = sample_refute_2d(f, region, args.budget)
    if w is None:
        _emit({"region": str(region), "witness": None, "budget": args.budget},
              f"no witness in {args.budget} samples", args.format)
        return EXIT_OK
    _emit({"region": str(region), "witness": w.to_dict(), "budget": args.budget},
          f"f = {format_rational(w.value)} at (x, y) = ({format_rational(w.x)}, {format_rational(w.y)})",
          args.format)
    return EXIT_REJECT


def cmd_fiber(args) -> int:
    S = _gens(args.gens, 2)
    c = _rational(args.at)
    fs = fiber_set(S, c)
    out = fs.to_dict()
    text = fs.to_text()
    if args.check:
        rep = endpoint_generator_check(S, c, _precision(args))
        out["endpoint_check"] = rep.to_dict()
        text += f"\n{rep.status}"
    _emit(out, text, args.format, default="text")
    return EXIT_OK


def cmd_obstruct(args) -> int:
    S = _gens(args.gens, 2)
    U = _union(args.set)
    rep = obstruction_scan(S, U, args.samples, _precision(args))
    d = rep.to_dict()
    text = (f"applicable {rep.applicable}/{rep.samples}: holds {rep.holds}, fails {rep.fails}, "
            f"undecided {rep.undecided}\n{rep.note}")
    _emit(d, text, args.format)
    return EXIT_OK


def cmd_gen(args) -> int:
    G = natural_generators(_union(args.set))
    _emit({"generators": [str(g) for g in G.gens]}, str(G), args.format, default="text")
    return EXIT_OK


def cmd_rand_cert(args) -> int:
    if args.gens:
        G = _gens(args.gens)
    elif args.set:
        G = natural_generators(_union(args.set))
        if args.vars > 1:
            G = G.embed(args.vars)
    else:
        raise UsageError("rand-cert needs --gens or --set")
    if G.nvars < args.vars:
        G = G.embed(args.vars)
    try:
        c = random_certificate(G, args.degree, args.terms, args.seed, kind=args.kind)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _emit_cert(c, args.format)
    return EXIT_OK


# ----------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default=None)
    common.add_argument("--seed", type=int, default=0)

    p = _Parser(prog="posicert", description="Exact positivity certificates.")
    p.add_argument("--version", action="version", version=f"posicert {__version__}")
    sub = p.add_subparsers(dest="command", metavar="command", parser_class=_Parser)
    sub.required = True

    def add(name, func, help_text):
        sp = sub.add_parser(name, parents=[common], help=help_text)
        sp.set_defaults(func=func)
        return sp

    sp = add("certify-1d", cmd_certify_1d, "certify a univariate polynomial non-negative on U")
    sp.add_argument("--poly", required=True)
    sp.add_argument("--set", required=True, help='interval union such as "[0,1]u[2,3]"')
    sp.add_argument("--module-form", action="store_true")

    sp = add("verify", cmd_verify, "check a certificate against a polynomial")
    sp.add_argument("--poly", required=True)
    sp.add_argument("--cert", default="-", help="certificate JSON file, - for stdin")

    sp = add("expand", cmd_expand, "print the polynomial a certificate represents")
    sp.add_argument("--cert", default="-")

    sp = add("lift-halfstrip", cmd_lift_halfstrip, "strip certificate of f(x,y^2) to half-strip certificate of f")
    sp.add_argument("--cert", default="-")
    sp.add_argument("--set", default=None)

    sp = add("shift", cmd_shift, "substitute y -> y - q(x) in a half-strip certificate")
    sp.add_argument("--q", required=True)
    sp.add_argument("--cert", default="-")

    sp = add("xycut", cmd_xycut, "pull a (u,v) certificate back along u = x, v = xy")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--cert", default="-")

    sp = add("surface-z", cmd_surface_z, "certificate on z = x^2 from one of f(x,y,x^2)")
    sp.add_argument("--poly", required=True)
    sp.add_argument("--cert", default="-")

    sp = add("refute", cmd_refute, "search for a point where f < 0")
    sp.add_argument("--poly", required=True)
    sp.add_argument("--set", default=None)
    sp.add_argument("--q", default=None, help="half-strip y >= q(x) instead of the strip")
    sp.add_argument("--gens", default=None, help="custom region, generators separated by ;")
    sp.add_argument("--budget", type=int, default=1000)

    sp = add("fiber", cmd_fiber, "the set {y : g_i(c, y) >= 0}")
    sp.add_argument("--gens", required=True)
    sp.add_argument("--at", required=True)
    sp.add_argument("--check", action="store_true", help="also run the endpoint generator check")
    sp.add_argument("--precision-bits", type=int, default=None)

    sp = add("obstruct", cmd_obstruct, "endpoint generator check at sampled x")
    sp.add_argument("--gens", required=True)
    sp.add_argument("--set", default="[0,1]")
    sp.add_argument("--samples", type=int, default=16)
    sp.add_argument("--precision-bits", type=int, default=None)

    sp = add("gen", cmd_gen, "natural generators of an interval union")
    sp.add_argument("--set", required=True)

    sp = add("rand-cert", cmd_rand_cert, "reproducible random certificate")
    sp.add_argument("--gens", default=None)
    sp.add_argument("--set", default=None)
    sp.add_argument("--vars", type=int, default=1, choices=(1, 2, 3))
    sp.add_argument("--degree", type=int, default=2)
    sp.add_argument("--terms", type=int, default=3)
    sp.add_argument("--kind", choices=(PREORDERING, MODULE), default=PREORDERING)
    return p


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"posicert: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NegativeOnSetError as exc:
        if args.format != "text":
            sys.stdout.write(_json({"verdict": "negative", "witness": format_rational(exc.witness),
                                    "value": format_rational(exc.value)}))
        print(f"posicert: {exc}", file=sys.stderr)
        return EXIT_REJECT
    except CapabilityError as exc:
        print(f"posicert: capability limit: {exc}", file=sys.stderr)
        return EXIT_CAPABILITY
    except (PreconditionError, CertificateError, ArityError) as exc:
        print(f"posicert: rejected: {exc}", file=sys.stderr)
        return EXIT_REJECT
    except PosicertError as exc:
        print(f"posicert: internal error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())
