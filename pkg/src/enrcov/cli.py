"""Command-line interface.

Exit codes: 0 everything passed, 1 a verification check failed, 2 the input
could not be read or parsed, 3 an internal consistency assertion fired.
"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .examples import PredicateError, load_example
from .grammar import ParseError, parse_poly
from .inputfmt import ExampleSpec
from .poly import Ring

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3


class InputError(Exception):
    pass


def _load(ref: str) -> ExampleSpec:
    try:
        return load_example(ref)
    except (OSError, ParseError, ValueError) as exc:
        raise InputError(f"{ref}: {exc}") from None


def _out(text: str | bytes) -> None:
    if isinstance(text, bytes):
        sys.stdout.buffer.write(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    sys.stdout.flush()


# --- commands ------------------------------------------------------------

def cmd_verify_all(args) -> int:
    from .verify import Options, emit_summary, verify_all

    opts = Options(seed=args.seed, max_ext_degree=args.max_ext_degree, timings=args.timings)
    summary = verify_all(opts)
    _out(emit_summary(summary, args.format, args.timings))
    return EXIT_OK if summary.passed else EXIT_FAIL


def cmd_verify(args) -> int:
    from .verify import Options, emit_report, run_example

    spec = _load(args.example)
    opts = Options(seed=args.seed, max_ext_degree=args.max_ext_degree, timings=args.timings)
    report = run_example(spec, opts)
    _out(emit_report(report, args.format, args.timings))
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_sing(args) -> int:
    from .geometry import singular_points
    from .groebner import ExtensionTooSmall
    from .singclass import classify_point, format_multiset, image_type, lift_to_cover

    spec = _load(args.example)
    try:
        pts = singular_points(spec.atlas, args.max_ext_degree)
    except ExtensionTooSmall as exc:
        _out(f"extension too small: {exc}")
        return EXIT_FAIL
    classes = []
    for p in pts:
        c = classify_point(spec.atlas, p)
        classes.append(c)
        _out(f"{p.format()}: {c}  (quotient {image_type(c)}, covering "
             f"{format_multiset(lift_to_cover(c))})")
    _out(f"surface: {format_multiset(classes)}")
    _out(f"quotient: {format_multiset([i for i in map(image_type, classes) if i.kind != 'Smooth'])}")
    _out(f"covering: {format_multiset([x for c in classes for x in lift_to_cover(c)])}")
    return EXIT_OK


def cmd_lie(args) -> int:
    from .liealg import build_structure, classify_type, p_closed_lines

    spec = _load(args.example)
    if spec.basis is None:
        raise InputError(f"{args.example}: no basis declared")
    S = build_structure(spec.D1, spec.D2, seed=args.seed)
    W = S.field
    f = W.format
    d1, d2 = spec.basis
    _out(f"[{d1},{d2}] = ({f(S.bracket[0])}) {d1} + ({f(S.bracket[1])}) {d2}")
    _out(f"{d1}^[2] = ({f(S.s1[0])}) {d1} + ({f(S.s1[1])}) {d2}")
    _out(f"{d2}^[2] = ({f(S.s2[0])}) {d1} + ({f(S.s2[1])}) {d2}")
    census = p_closed_lines(S)
    _out(f"type: {classify_type(S)}")
    _out(f"p-closed lines: {census.signature()}")
    for line in census.lines:
        _out(f"  {line.format()} {line.kind}")
    if census.all_closed and census.additive != "all":
        for line in census.additive:
            _out(f"  additive {line.format()}")
    return EXIT_OK


def _coeff(text: str, W) -> int:
    R = Ring.make(["w"])
    try:
        p = parse_poly(text, R)
    except ParseError as exc:
        raise InputError(f"coefficient {text!r}: {exc}") from None
    return p.map_field(W).evaluate({"w": W.gen}).value


def cmd_fix(args) -> int:
    from .derivation import combine, fix_ideal, fixed_degree_at, p_closed
    from .geometry import ClosedPoint, _is_duplicate
    from .groebner import ExtensionTooSmall, NotZeroDimensional, solve_zero_dim
    from .gf2k import extension

    spec = _load(args.example)
    if spec.basis is None:
        raise InputError(f"{args.example}: no basis declared")
    W = spec.field if spec.field.degree % 2 == 0 else extension(spec.field, 2)
    parts = args.coeffs.split(",")
    if len(parts) != 2:
        raise InputError("--coeffs needs two comma-separated field elements")
    e1, e2 = (W.element(_coeff(t, W)) for t in parts)
    D = combine([(e1, spec.D1), (e2, spec.D2)])
    _out(f"D = ({e1}) {spec.basis[0]} + ({e2}) {spec.basis[1]}")
    free = True
    seen: list[ClosedPoint] = []
    for ch in spec.atlas.charts:
        gb = fix_ideal(D, ch.name)
        if gb.is_unit():
            _out(f"{ch.name}: fixed ideal = (1)")
            continue
        free = False
        _out(f"{ch.name}: fixed ideal = ({', '.join(map(str, gb.polys))})")
        try:
            sol = solve_zero_dim(list(gb.polys), args.max_ext_degree)
        except NotZeroDimensional:
            _out("  fixed locus is positive dimensional")
            continue
        except ExtensionTooSmall as exc:
            _out(f"  extension too small: {exc}")
            continue
        for pt in sol.points:
            p = ClosedPoint(ch.name, sol.field, pt, ch.names)
            if any(q.field is p.field for q in seen) and _is_duplicate(spec.atlas, p, seen):
                _out(f"  {p.format()}: seen on an earlier chart")
                continue
            seen.append(p)
            _out(f"  {p.format()}: length {fixed_degree_at(D, p)}")
    _out(f"fixed-point-free: {'yes' if free else 'no'}")
    pc = p_closed((e1, e2), (spec.D1, spec.D2))
    _out(f"p-closed: {pc.kind}" + ("" if pc.lam is None else f", lambda = {pc.lam}"))
    return EXIT_OK


def _read_jet(path: str):
    from .gf2k import ReducibleModulus, field as make_field
    from .singclass import Jet

    fld, order, body, start = make_field(), None, [], None
    try:
        text = open(path, encoding="utf-8").read()
    except OSError as exc:
        raise InputError(f"{path}: {exc}") from None
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        kw, _, rest = line.partition(" ")
        try:
            if kw == "field":
                if rest.strip() != "gf2":
                    m = parse_poly(rest, Ring.make(["w"]), ln)
                    fld = make_field(sum(c << e[0] for e, c in m.terms.items()))
            elif kw == "order":
                order = int(rest)
            else:
                body.append(line)
                start = start or ln
        except (ParseError, ReducibleModulus, ValueError) as exc:
            raise InputError(f"{path}: line {ln}: {exc}") from None
    if not body:
        raise InputError(f"{path}: no polynomial")
    R = Ring(fld, ("x", "y", "z"), frozenset())
    try:
        F = parse_poly(" ".join(body), R, start)
    except ParseError as exc:
        raise InputError(f"{path}: {exc}") from None
    return Jet.of(F, order)


def cmd_classify_jet(args) -> int:
    from .singclass import classify_jet, format_multiset, image_type, lift_to_cover

    J = _read_jet(args.jetfile)
    c = classify_jet(J)
    _out(str(c))
    if c.kind == "Unclassified":
        return EXIT_FAIL
    try:
        _out(f"quotient: {image_type(c)}; covering: {format_multiset(lift_to_cover(c))}")
    except ValueError:
        pass
    return EXIT_OK


# --- entry point ---------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="enrcov", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"enrcov {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, fmt=False):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--max-ext-degree", type=int, default=4)
        if fmt:
            p.add_argument("--format", choices=("text", "json"), default="text")
            p.add_argument("--timings", action="store_true", help="include timings (reports stop being byte-stable)")

    p = sub.add_parser("verify-all", help="verify every builtin example")
    common(p, True)
    p.set_defaults(func=cmd_verify_all)
    p = sub.add_parser("verify", help="verify one example (file or builtin name)")
    p.add_argument("example")
    common(p, True)
    p.set_defaults(func=cmd_verify)
    p = sub.add_parser("sing", help="singular points and their classes")
    p.add_argument("example")
    common(p)
    p.set_defaults(func=cmd_sing)
    p = sub.add_parser("lie", help="restricted Lie structure, type and p-closed lines")
    p.add_argument("example")
    common(p)
    p.set_defaults(func=cmd_lie)
    p = sub.add_parser("fix", help="fixed ideal of e1 D1 + e2 D2")
    p.add_argument("example")
    p.add_argument("--coeffs", required=True, help="e1,e2 as polynomials in w, e.g. 1,w+1")
    common(p)
    p.set_defaults(func=cmd_fix)
    p = sub.add_parser("classify-jet", help="class of a double point z^2 + ... in x, y, z")
    p.add_argument("jetfile")
    p.set_defaults(func=cmd_classify_jet)
    return ap


def main(argv: list[str] | None = None) -> int:
    from .singclass import TableAmbiguity

    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, PredicateError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (TableAmbiguity, AssertionError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as exc:  # anything unexpected is a bug, not a failed check
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
