"""Verification pipeline for example surfaces and report emission.

Each example runs a fixed sequence of checks.  A check either passes,
fails (with a witness) or is skipped because an earlier check it depends
on did not produce data.  Reports contain no timings unless asked for, so
two runs on the same input produce the same bytes.
"""

from __future__ import annotations

import json
import time
from math import lcm
from dataclasses import dataclass, field as dc_field
from typing import Any, Callable

from .derivation import (Derivation, canonical_line, combine, fixed_degree_at, is_fixed_point_free,
                         p_closed, tangent_fibers, transition_compatible, well_defined)
from .examples import Predicate, builtin_registry
from .geometry import (Chart, ClosedPoint, NotWeierstrass, SurfaceAtlas, hasse_coefficient_at_fiber,
                       quadric_pair_hasse, singular_points, validate_atlas, weierstrass_coefficients)
from .gf2k import Field, FieldElement, embedder, extension, gf
from .groebner import ExtensionTooSmall
from .inputfmt import ExampleSpec
from .liealg import build_structure, classify_type, p_closed_lines
from .poly import Ring
from .singclass import (SingClass, TableAmbiguity, classify_point, format_multiset, image_type,
                        lift_to_cover, parse_multiset)

__all__ = ["Options", "Check", "VerificationReport", "Summary", "run_example", "verify_all",
           "emit_report", "emit_summary", "model_fixed_degree", "fiber_hasse", "SCHEMA", "CHECK_TITLES"]

SCHEMA = "enrcov-report/1"

CHECK_TITLES = {
    "C1": "atlas validation",
    "C2": "derivations well defined and transition compatible",
    "C3": "restricted Lie structure and type",
    "C4": "singular points of the surface",
    "C5": "singularities of the quotient",
    "C6": "singularities of the canonical covering",
    "C7": "index identity",
    "C8": "fixed-point-freeness over GF(4)^2",
    "C9": "canonical line types",
    "C10": "quotient verdict per fixed-point-free line",
    "TF": "tangent fiber formula",
    "ORD": "ordinariness of tangent fibers",
}


@dataclass(frozen=True)
class Options:
    seed: int = 0
    max_ext_degree: int = 4
    timings: bool = False


@dataclass
class Check:
    id: str
    status: str  # "pass" | "fail" | "skip"
    detail: str = ""
    witness: Any = None
    seconds: float = 0.0

    @property
    def title(self) -> str:
        return CHECK_TITLES.get(self.id, self.id)


@dataclass
class VerificationReport:
    example: str
    checks: list[Check] = dc_field(default_factory=list)
    fields: list[str] = dc_field(default_factory=list)
    lifted: str = ""
    lie_type: str = ""
    verdict: str = ""
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.status != "fail" for c in self.checks)

    def check(self, cid: str) -> Check | None:
        return next((c for c in self.checks if c.id == cid), None)


# --- helpers -------------------------------------------------------------

def _gf4_over(base: Field) -> Field:
    return base if base.degree % 2 == 0 else extension(base, 2)


def _norm(W: Field, a: int, b: int) -> tuple[int, int]:
    return (0, 1) if a == 0 else (1, W.div(b, a))


def _fmt_line(W: Field, p: tuple[int, int]) -> str:
    return f"[{W.format(p[0])}:{W.format(p[1])}]"


def _lines_equal(F1: Field, p1: tuple[int, int], F2: Field, p2: tuple[int, int]) -> bool:
    K = gf(lcm(F1.degree, F2.degree))
    e1, e2 = embedder(F1, K), embedder(F2, K)
    return tuple(map(e1, p1)) == tuple(map(e2, p2))


def _same_line(W: Field, p: tuple[int, int], line: tuple[FieldElement, FieldElement]) -> bool:
    return _lines_equal(W, p, line[0].field, (line[0].value, line[1].value))


def _sorted(ms) -> list[SingClass]:
    return sorted(ms, key=SingClass.sort_key)


def model_fixed_degree(dx: str, dy: str, point: tuple[int, int] = (0, 0)) -> int:
    """Fixed-scheme length at a point of the plane derivation X -> dx, Y -> dy."""
    R = Ring.make(["X", "Y"])
    chart = Chart("plane", R, ())
    atlas = SurfaceAtlas("model", (chart,), ())
    D = Derivation.build(atlas, {"plane": {"X": R.parse(dx), "Y": R.parse(dy)}}, "model")
    return fixed_degree_at(D, ClosedPoint("plane", R.field, point, ("X", "Y")))


def fiber_hasse(atlas: SurfaceAtlas, value: FieldElement | None) -> tuple[str, str, FieldElement]:
    """(chart, method, invariant) for the fiber at ``value`` (None: at infinity)."""
    at_inf = value is None
    for ch in atlas.charts:
        if ch.base is None or ch.base_at_infinity != at_inf:
            continue
        v = value if value is not None else ch.ring.field.element(0)
        names = [n for n in ch.names if n != ch.base]
        for rel in ch.relations:
            for x in names:
                for y in names:
                    if x == y or rel.degree(y) != 2:
                        continue
                    try:
                        weierstrass_coefficients(rel, x, y)
                        return ch.name, "a1", hasse_coefficient_at_fiber(ch, v, x, y)
                    except NotWeierstrass:
                        continue
        try:
            return ch.name, "quadric-pair", quadric_pair_hasse(ch, v)
        except NotWeierstrass:
            continue
    raise NotWeierstrass("no chart carries a Weierstrass or quadric-pair model of the fiber")


# --- the pipeline --------------------------------------------------------

class _Run:
    def __init__(self, spec: ExampleSpec, options: Options):
        self.spec = spec
        self.opt = options
        self.report = VerificationReport(spec.name)
        self.fields: set[str] = set()
        self.points: list[ClosedPoint] | None = None
        self.classes: list[SingClass] | None = None
        self.lines: list | None = None
        self.structure = None
        self.fpf: dict[tuple[int, int], bool] = {}
        self.lambdas: dict[tuple[int, int], FieldElement | None] = {}
        self.W = _gf4_over(spec.field)

    def add(self, cid: str, fn: Callable[[], tuple[str, str, Any]]) -> None:
        t0 = time.perf_counter()
        try:
            status, detail, witness = fn()
        except TableAmbiguity:
            raise
        except Exception as exc:  # a crashing check is a failed check
            status, detail, witness = "fail", f"{type(exc).__name__}: {exc}", None
        self.report.checks.append(Check(cid, status, detail, witness, time.perf_counter() - t0))

    def expect(self, key: str) -> str | None:
        return self.spec.expect.get(key)

    def compare_multiset(self, key: str, got: list[SingClass]) -> tuple[str, str, Any]:
        text = format_multiset(got)
        want = self.expect(key)
        if want is None:
            return "pass", f"{text} (no expectation)", None
        ok = _sorted(got) == _sorted(parse_multiset(want))
        return ("pass" if ok else "fail"), f"{text}" + ("" if ok else f", expected {want}"), \
            None if ok else {"computed": text, "expected": want}

    # C1
    def c1(self):
        r = validate_atlas(self.spec.atlas)
        if r.ok:
            return "pass", f"{len(self.spec.atlas.charts)} charts, {len(self.spec.atlas.transitions)} transitions", None
        return "fail", r.problems[0], list(r.problems)

    # C2
    def c2(self):
        problems = []
        ds = list(self.spec.derivations.values())
        for D in ds:
            ok, wit = well_defined(D)
            if not ok:
                problems.append(f"{D.name}: {wit}")
            for T in self.spec.atlas.transitions:
                ok, wit = transition_compatible(D, T)
                if not ok:
                    problems.append(f"{D.name} on {T.source}->{T.target}: {wit}")
        if problems:
            return "fail", problems[0], problems
        return "pass", f"{len(ds)} derivations", None

    # C3
    def c3(self):
        S = build_structure(self.spec.D1, self.spec.D2, seed=self.opt.seed)
        self.structure = S
        t = classify_type(S)
        census = p_closed_lines(S)
        for l in census.lines:
            self.fields.add(l.field.name)
        add = census.additive
        add_txt = "all" if add == "all" else ", ".join(l.format() for l in add) or "none"
        self.report.lie_type = str(t)
        detail = f"type {t}, p-closed lines: {census.signature()}, additive: {add_txt}"
        want = self.expect("lie-type")
        if want is not None and str(t) != want:
            return "fail", detail + f", expected type {want}", {"type": t, "expected": want}
        return "pass", detail, None

    # C4
    def c4(self):
        try:
            pts = singular_points(self.spec.atlas, self.opt.max_ext_degree)
        except ExtensionTooSmall as exc:
            return "fail", f"extension too small: {exc}", {"max_ext_degree": self.opt.max_ext_degree}
        classes = [classify_point(self.spec.atlas, p) for p in pts]
        self.points, self.classes = pts, classes
        for p in pts:
            self.fields.add(p.field.name)
        status, detail, wit = self.compare_multiset("sing-cover", classes)
        pts_txt = [f"{p.format()}: {c}" for p, c in zip(pts, classes)]
        return status, detail, {"points": pts_txt, **(wit or {})}

    def _need_points(self) -> bool:
        return self.classes is not None

    # C5
    def c5(self):
        if not self._need_points():
            return "skip", "no singular points (C4 did not finish)", None
        return self.compare_multiset("sing-image", [c for c in map(image_type, self.classes)
                                                    if c.kind != "Smooth"])

    # C6
    def c6(self):
        if not self._need_points():
            return "skip", "no singular points (C4 did not finish)", None
        lifted = [x for c in self.classes for x in lift_to_cover(c)]
        self.report.lifted = format_multiset(lifted)
        return self.compare_multiset("sing-lifted", lifted)

    # C7
    def c7(self):
        if not self._need_points():
            return "skip", "no singular points (C4 did not finish)", None
        if any(c.kind == "EDP_E12" for c in self.classes):
            d = model_fixed_degree("Y^6", "X^2")
            idx = SingClass("EDP_E12").index
            ok = d == idx
            return ("pass" if ok else "fail"), \
                f"elliptic point: model fixed degree {d}, index {idx} (index identity not applicable)", \
                None if ok else {"degree": d, "index": idx}
        cover = sum(c.index for c in self.classes)
        image = sum(image_type(c).index for c in self.classes)
        lifted = sum(x.index for c in self.classes for x in lift_to_cover(c))
        ok = cover == 12 + image and lifted == 12
        detail = f"{cover} = 12 + {image}, lifted total {lifted}"
        return ("pass" if ok else "fail"), detail, None if ok else {"cover": cover, "image": image,
                                                                     "lifted": lifted}

    def _canonical_lines(self):
        if self.lines is None:
            self.lines = [canonical_line(p, (self.spec.D1, self.spec.D2)) for p in self.points]
        return self.lines

    def _derivation(self, p: tuple[int, int]) -> Derivation:
        W = self.W
        return combine([(W.element(p[0]), self.spec.D1), (W.element(p[1]), self.spec.D2)])

    # C8
    def c8(self):
        W = self.W
        self.fields.add(W.name)
        want = self.expect("generic")
        pred = Predicate(want) if want else None
        mismatch = []
        for a in W.elements():
            for b in W.elements():
                if not a and not b:
                    continue
                line = _norm(W, a, b)
                if line not in self.fpf:
                    self.fpf[line] = is_fixed_point_free(self._derivation(line))
                got = self.fpf[line]
                if pred is not None and pred(W, a, b) != got:
                    mismatch.append(f"({W.format(a)}, {W.format(b)}): fixed-point-free={got}")
        n_free = sum(self.fpf.values())
        detail = f"{n_free} of {len(self.fpf)} GF(4)-lines fixed-point-free"
        if mismatch:
            return "fail", detail + f"; predicate {want!r} disagrees at {len(mismatch)} points", mismatch
        if not self._need_points():
            return "skip", detail + "; canonical-line containment needs C4", None
        lines = self._canonical_lines()
        bad = []
        for line, free in sorted(self.fpf.items()):
            hits = [p.format() for p, l in zip(self.points, lines) if l is not None and _same_line(W, line, l)]
            if free and hits:
                bad.append(f"{_fmt_line(W, line)} is fixed-point-free but is the canonical line of {hits}")
            if not free and not hits:
                bad.append(f"{_fmt_line(W, line)} has fixed points but is no canonical line")
        if bad:
            return "fail", bad[0], bad
        return "pass", detail + ("" if pred is None else f", agrees with {want!r}") + \
            "; every fixing line is a canonical line", None

    # C9
    def c9(self):
        if not self._need_points():
            return "skip", "no singular points (C4 did not finish)", None
        lines = self._canonical_lines()
        rows, bad = [], []
        additive_lines = []
        for p, c, l in zip(self.points, self.classes, lines):
            if l is None:
                bad.append(f"{p.format()}: no canonical line")
                continue
            lifted = lift_to_cover(c)
            law = "multiplicative" if all(x.kind == "A" and x.n % 2 == 1 for x in lifted) else "additive"
            K = l[0].field
            kind = p_closed(l, (self.spec.D1.to_field(K), self.spec.D2.to_field(K))).kind
            rows.append(f"{p.format()} {c}: [{l[0]}:{l[1]}] {kind}")
            if kind != law:
                bad.append(f"{p.format()} ({c}, lifts to {format_multiset(lifted)}): line is {kind}, "
                           f"expected {law}")
            if law == "additive":
                additive_lines.append((p, l))
        if self.structure is not None and not self.structure.is_abelian():
            census = p_closed_lines(self.structure)
            for p, l in additive_lines:
                for a in census.additive:
                    if not _lines_equal(a.field, a.point, l[0].field, (l[0].value, l[1].value)):
                        bad.append(f"additive line {a.format()} differs from the canonical line at {p.format()}")
        if bad:
            return "fail", bad[0], bad
        return "pass", f"{len(rows)} points follow the type law", rows

    # C10
    def c10(self):
        W = self.W
        if not self.fpf:
            return "skip", "fixed-point-freeness not computed (C8 did not finish)", None
        rows, kinds, bad = [], set(), []
        for line, free in sorted(self.fpf.items()):
            if not free:
                continue
            pc = p_closed(tuple(W.element(v) for v in line), (self.spec.D1, self.spec.D2))
            self.lambdas[line] = pc.lam
            if not pc.closed:
                bad.append(f"{_fmt_line(W, line)} is not p-closed")
                continue
            v = "classical" if pc.lam.value else "supersingular"
            kinds.add(v)
            rows.append(f"{_fmt_line(W, line)}: lambda={pc.lam}, {pc.kind}, {v}")
        verdict = kinds.pop() if len(kinds) == 1 else ("mixed" if kinds else "none")
        self.report.verdict = verdict
        want = self.expect("verdict")
        if bad:
            return "fail", bad[0], bad
        if want is not None and verdict != want:
            return "fail", f"verdict {verdict}, expected {want}", rows
        return "pass", f"verdict {verdict}", rows

    # tangent fibers
    def tf(self):
        want = self.expect("tangent-fibers")
        if want is None:
            return "skip", "no expectation", None
        atlas = self.spec.atlas
        ch = next((c for c in atlas.charts if c.base and not c.base_at_infinity), None)
        if ch is None:
            return "fail", "no finite base coordinate", None
        R = Ring.make(["e1", "e2", ch.base], fld=self.spec.field)
        e1, e2 = R.var("e1"), R.var("e2")
        imgs = []
        for D in (self.spec.D1, self.spec.D2):
            img = D.images[ch.name][ch.base]
            if img.variables() - {ch.base} or img.is_laurent():
                return "fail", f"{D.name}({ch.base}) = {img} is not a polynomial in {ch.base}", None
            imgs.append(img.substitute({n: (R.var(ch.base) if n == ch.base else R.one())
                                        for n in img.ring.names}, R))
        got = e1 * imgs[0] + e2 * imgs[1]
        exp = R.parse(want)
        if got != exp:
            return "fail", f"D({ch.base}) = {got}, expected {want}", {"computed": str(got), "expected": want}
        return "pass", f"D({ch.base}) = {got}", None

    # ordinariness
    def ordinary(self):
        want = self.expect("ordinary")
        if not self.fpf:
            return "skip", "fixed-point-freeness not computed (C8 did not finish)", None
        W = self.W
        rows, flags, bad = [], set(), []
        for line, free in sorted(self.fpf.items()):
            if not free:
                continue
            fibers = tangent_fibers(self._derivation(line))
            if fibers == "all" or not fibers:
                bad.append(f"{_fmt_line(W, line)}: tangent fibers {fibers or 'none'}")
                continue
            vals, ordinary = [], True
            for f in fibers:
                ch, method, h = fiber_hasse(self.spec.atlas, f.value)
                if f.value is not None:
                    self.fields.add(f.value.field.name)
                vals.append(f"{f.format()}: {method}={h} on {ch}")
                ordinary = ordinary and bool(h.value)
            flags.add(ordinary)
            rows.append(f"{_fmt_line(W, line)}: " + "; ".join(vals))
            lam = self.lambdas.get(line)
            if lam is not None and bool(lam.value) != ordinary:
                bad.append(f"{_fmt_line(W, line)}: ordinary={ordinary} but lambda={lam}")
        agg = {frozenset({True}): "yes", frozenset({False}): "no"}.get(frozenset(flags), "mixed")
        if bad:
            return "fail", bad[0], bad
        if want is not None and agg != want:
            return "fail", f"ordinary {agg}, expected {want}", rows
        return "pass", f"ordinary {agg}", rows


def run_example(spec: ExampleSpec, options: Options = Options()) -> VerificationReport:
    t0 = time.perf_counter()
    run = _Run(spec, options)
    for cid, fn in (("C1", run.c1), ("C2", run.c2), ("C3", run.c3), ("C4", run.c4),
                    ("C5", run.c5), ("C6", run.c6), ("C7", run.c7), ("C8", run.c8),
                    ("C9", run.c9), ("C10", run.c10), ("TF", run.tf), ("ORD", run.ordinary)):
        run.add(cid, fn)
    run.report.fields = sorted(run.fields)
    run.report.seconds = time.perf_counter() - t0
    return run.report


@dataclass
class Summary:
    reports: list[VerificationReport]
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.reports)


def verify_all(options: Options = Options(), specs: list[ExampleSpec] | None = None) -> Summary:
    t0 = time.perf_counter()
    reports = [run_example(s, options) for s in (builtin_registry() if specs is None else specs)]
    return Summary(reports, time.perf_counter() - t0)


# --- emission ------------------------------------------------------------

def _report_dict(r: VerificationReport, timings: bool) -> dict:
    d = {
        "example": r.example,
        "passed": r.passed,
        "lifted": r.lifted,
        "lie_type": r.lie_type,
        "verdict": r.verdict,
        "fields": list(r.fields),
        "checks": [
            {"id": c.id, "title": c.title, "status": c.status, "detail": c.detail, "witness": c.witness,
             **({"seconds": round(c.seconds, 3)} if timings else {})}
            for c in r.checks
        ],
    }
    if timings:
        d["seconds"] = round(r.seconds, 3)
    return d


def _report_text(r: VerificationReport, timings: bool) -> list[str]:
    out = [f"== {r.example}: {'PASS' if r.passed else 'FAIL'}"
           + (f" ({r.seconds:.1f}s)" if timings else "")]
    for c in r.checks:
        t = f" [{c.seconds:.2f}s]" if timings else ""
        out.append(f"  {c.id:<4} {c.status:<4}  {c.title}: {c.detail}{t}")
        if c.status == "fail" and c.witness is not None:
            wit = c.witness if isinstance(c.witness, list) else [json.dumps(c.witness, sort_keys=True)]
            out += [f"         - {w}" for w in wit]
    if r.fields:
        out.append(f"  fields: {', '.join(r.fields)}")
    return out


def emit_report(report: VerificationReport | None, fmt: str = "text", timings: bool = False) -> bytes:
    if fmt == "json":
        doc = {"schema": SCHEMA, "report": None if report is None else _report_dict(report, timings)}
        if report is None:
            doc["report"] = {"example": "", "passed": True, "checks": []}
        return (json.dumps(doc, indent=2) + "\n").encode()
    if fmt != "text":
        raise ValueError(f"unknown format {fmt!r}")
    if report is None:
        return b"(no checks)\n"
    return ("\n".join(_report_text(report, timings)) + "\n").encode()


def emit_summary(summary: Summary, fmt: str = "text", timings: bool = False) -> bytes:
    if fmt == "json":
        doc = {"schema": SCHEMA, "passed": summary.passed,
               "examples": [_report_dict(r, timings) for r in summary.reports]}
        if timings:
            doc["seconds"] = round(summary.seconds, 3)
        return (json.dumps(doc, indent=2) + "\n").encode()
    if fmt != "text":
        raise ValueError(f"unknown format {fmt!r}")
    lines = []
    for r in summary.reports:
        lines += _report_text(r, timings)
    n = sum(r.passed for r in summary.reports)
    lines += ["", f"{'example':<18} {'lifted configuration':<22} {'type':<5} {'verdict':<14} result"]
    for r in summary.reports:
        lines.append(f"{r.example:<18} {r.lifted:<22} {r.lie_type:<5} {r.verdict:<14} "
                     f"{'pass' if r.passed else 'FAIL'}")
    lines.append(f"{n}/{len(summary.reports)} examples pass"
                 + (f" in {summary.seconds:.1f}s" if timings else ""))
    return ("\n".join(lines) + "\n").encode()
