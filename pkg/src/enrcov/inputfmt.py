"""Line-oriented example description format.

    field gf2 | field <modulus in w>
    chart <name> vars=<v1,...> [inverted=<v,...>] [dim=<k>]
    relation <chart> : <poly>
    transition <src>-><dst> [invert=<v,...>] : <var>=<expr>; ...
    derivation <name> <chart> : <var>=<expr>; ...
    basis <name1>,<name2>
    base-coordinate <chart>:<var> [at-infinity]
    expect <key> = <value>

``#`` starts a comment.  Expressions follow the polynomial grammar.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field

from .geometry import Chart, SurfaceAtlas, TransitionMap
from .gf2k import Field, ReducibleModulus, field as make_field
from .grammar import ParseError, parse_poly
from .poly import Ring

__all__ = ["ExampleSpec", "parse_input", "EXPECT_KEYS", "ParseError"]

EXPECT_KEYS = ("sing-cover", "sing-image", "sing-lifted", "lie-type", "verdict", "generic",
               "tangent-fibers", "ordinary")


@dataclass
class ExampleSpec:
    name: str
    field: Field
    atlas: SurfaceAtlas
    derivations: dict = dc_field(default_factory=dict)
    basis: tuple[str, str] | None = None
    expect: dict[str, str] = dc_field(default_factory=dict)
    source: str = ""

    @property
    def D1(self):
        return self.derivations[self.basis[0]]

    @property
    def D2(self):
        return self.derivations[self.basis[1]]


_NAME = r"[A-Za-z][A-Za-z0-9_]*"


def _names(text: str, line: int, col: int) -> list[str]:
    out = [n.strip() for n in text.split(",") if n.strip()]
    for n in out:
        if not re.fullmatch(_NAME, n):
            raise ParseError(f"bad variable name {n!r}", line, col + text.find(n) + 1)
    return out


def _assignments(body: str, ring: Ring, line: int, col: int) -> dict:
    out = {}
    pos = 0
    for part in body.split(";"):
        start = col + pos
        pos += len(part) + 1
        if not part.strip():
            continue
        if "=" not in part:
            raise ParseError("expected <var>=<expr>", line, start + 1)
        lhs, rhs = part.split("=", 1)
        var = lhs.strip()
        off = start + len(lhs) + 1
        out[var] = (parse_poly(rhs, ring, line, off), start + len(lhs) - len(lhs.lstrip()) + 1)
    return out


def parse_input(text: str, name: str = "input"):
    """Parse a description into an :class:`ExampleSpec` (unvalidated geometry)."""
    from .derivation import Derivation

    fld: Field | None = None
    charts: dict[str, dict] = {}
    order: list[str] = []
    transitions = []
    derivs: dict[str, dict] = {}
    basis = None
    expect: dict[str, str] = {}
    bases: dict[str, tuple[str, bool]] = {}

    def need_field(ln):
        nonlocal fld
        if fld is None:
            fld = make_field()
        return fld

    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        indent = len(line) - len(line.lstrip())
        kw, _, rest = line.strip().partition(" ")
        rest_col = indent + len(kw) + 1 + (len(rest) - len(rest.lstrip()))
        rest = rest.strip()
        if kw == "field":
            if rest == "gf2":
                fld = make_field()
            else:
                R = Ring.make(["w"])
                m = parse_poly(rest, R, ln, rest_col)
                mod = 0
                for e, c in m.terms.items():
                    mod ^= c << e[0]
                try:
                    fld = make_field(mod)
                except ReducibleModulus as exc:
                    raise ParseError(str(exc), ln, rest_col + 1) from None
        elif kw == "chart":
            parts = rest.split()
            if not parts:
                raise ParseError("chart needs a name", ln, rest_col + 1)
            cname = parts[0]
            opts = {}
            for p in parts[1:]:
                k, _, v = p.partition("=")
                opts[k] = v
            if "vars" not in opts:
                raise ParseError("chart needs vars=", ln, rest_col + 1)
            col = raw.find("vars=")
            vs = _names(opts["vars"], ln, col + 5)
            inv = _names(opts.get("inverted", ""), ln, raw.find("inverted=") + 9)
            bad = [v for v in inv if v not in vs]
            if bad:
                raise ParseError(f"inverted variable {bad[0]!r} not in vars", ln, raw.find(bad[0], raw.find("inverted=")) + 1)
            if cname in charts:
                raise ParseError(f"duplicate chart {cname!r}", ln, rest_col + 1)
            charts[cname] = dict(ring=Ring(need_field(ln), tuple(vs), frozenset(inv)), rels=[],
                                 dim=int(opts.get("dim", 2)))
            order.append(cname)
        elif kw == "relation":
            cname, sep, body = rest.partition(":")
            cname = cname.strip()
            if not sep:
                raise ParseError("expected ':'", ln, rest_col + len(rest) + 1)
            if cname not in charts:
                raise ParseError(f"unknown chart {cname!r}", ln, rest_col + 1)
            off = raw.index(":", rest_col) + 1
            charts[cname]["rels"].append(parse_poly(body, charts[cname]["ring"], ln, off))
        elif kw == "transition":
            head, sep, body = rest.partition(":")
            if not sep:
                raise ParseError("expected ':'", ln, rest_col + len(rest) + 1)
            hp = head.split()
            m = re.fullmatch(rf"({_NAME})->({_NAME})", hp[0]) if hp else None
            if not m:
                raise ParseError("expected <src>-><dst>", ln, rest_col + 1)
            src, dst = m.groups()
            for c in (src, dst):
                if c not in charts:
                    raise ParseError(f"unknown chart {c!r}", ln, rest_col + 1)
            inv = []
            for opt in hp[1:]:
                if not opt.startswith("invert="):
                    raise ParseError(f"unknown option {opt!r}", ln, raw.find(opt) + 1)
                inv = _names(opt[7:], ln, raw.find(opt) + 7)
            R = charts[src]["ring"].with_inverted(inv)
            off = raw.index(":", rest_col) + 1
            asg = _assignments(body, R, ln, off)
            for v, (_, c) in asg.items():
                if v not in charts[dst]["ring"].names:
                    raise ParseError(f"{v!r} is not a variable of chart {dst}", ln, c)
            transitions.append(TransitionMap(src, dst, {v: p for v, (p, _) in asg.items()}, frozenset(inv)))
        elif kw == "derivation":
            head, sep, body = rest.partition(":")
            hp = head.split()
            if not sep or len(hp) != 2:
                raise ParseError("expected derivation <name> <chart> : ...", ln, rest_col + 1)
            dname, cname = hp
            if cname not in charts:
                raise ParseError(f"unknown chart {cname!r}", ln, rest_col + 1)
            off = raw.index(":", rest_col) + 1
            asg = _assignments(body, charts[cname]["ring"], ln, off)
            for v, (_, c) in asg.items():
                if v not in charts[cname]["ring"].names:
                    raise ParseError(f"{v!r} is not a variable of chart {cname}", ln, c)
            derivs.setdefault(dname, {})[cname] = {v: p for v, (p, _) in asg.items()}
        elif kw == "basis":
            b = _names(rest, ln, rest_col)
            if len(b) != 2:
                raise ParseError("basis needs two derivation names", ln, rest_col + 1)
            basis = (b[0], b[1])
        elif kw == "base-coordinate":
            parts = rest.split()
            m = re.fullmatch(rf"({_NAME}):({_NAME})", parts[0]) if parts else None
            if not m:
                raise ParseError("expected <chart>:<var>", ln, rest_col + 1)
            cname, var = m.groups()
            if cname not in charts:
                raise ParseError(f"unknown chart {cname!r}", ln, rest_col + 1)
            if var not in charts[cname]["ring"].names:
                raise ParseError(f"undeclared variable {var!r}", ln, rest_col + len(cname) + 2)
            bases[cname] = (var, "at-infinity" in parts[1:])
        elif kw == "expect":
            key, sep, val = rest.partition("=")
            key = key.strip()
            if not sep:
                raise ParseError("expected <key> = <value>", ln, rest_col + 1)
            if key not in EXPECT_KEYS:
                raise ParseError(f"unknown expectation key {key!r}", ln, rest_col + 1)
            expect[key] = val.strip()
        elif kw == "name":
            name = rest
        else:
            raise ParseError(f"unknown keyword {kw!r}", ln, indent + 1)

    if not charts:
        raise ParseError("no charts declared", 1, 1)
    chart_objs = []
    for c in order:
        info = charts[c]
        base, inf = bases.get(c, (None, False))
        chart_objs.append(Chart(c, info["ring"], tuple(info["rels"]), base, inf, info["dim"]))
    atlas = SurfaceAtlas(name, tuple(chart_objs), tuple(transitions))
    ds = {}
    for dname, imgs in derivs.items():
        ds[dname] = Derivation.build(atlas, imgs, dname)
    if basis:
        for b in basis:
            if b not in ds:
                raise ParseError(f"basis names unknown derivation {b!r}", 1, 1)
    return ExampleSpec(name, fld or make_field(), atlas, ds, basis, expect, text)
