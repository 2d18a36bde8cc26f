"""Global derivations of an atlas, given chart by chart by their values on
the coordinates."""

from __future__ import annotations

from dataclasses import dataclass
from math import lcm
from typing import Mapping, Sequence

from .geometry import Chart, ClosedPoint, SurfaceAtlas, TransitionMap, _overlap_ideal
from .gf2k import Field, FieldElement, embedder, gf
from .groebner import GroebnerBasis, saturate_inverted
from .local import local_length
from .poly import Poly, Ring
from .univariate import factor, from_poly

__all__ = [
    "Derivation", "BasisCoordinates", "NotInSpan", "DegenerateBasis", "PClosed",
    "well_defined", "transition_compatible", "apply", "square", "bracket", "combine",
    "express_in_basis", "fix_ideal", "is_fixed_point_free", "fixed_degree_at", "p_closed",
    "canonical_line", "tangent_fibers", "TangentFiber", "chart_ideal",
]


class NotInSpan(ValueError):
    pass


class DegenerateBasis(ValueError):
    pass


_IDEALS: dict = {}


def chart_ideal(chart: Chart, fld: Field) -> GroebnerBasis:
    """The chart's saturated relation ideal with coefficients in ``fld``."""
    key = (id(chart), fld.modulus)
    if key not in _IDEALS:
        base = chart.ideal
        if fld is base.ring.field:
            _IDEALS[key] = (chart, base)
        else:
            R = base.ring.with_field(fld)
            polys = [Poly(R, p.map_field(fld).terms) for p in base.polys]
            _IDEALS[key] = (chart, GroebnerBasis(R, polys, base.order, polys))
    return _IDEALS[key][1]


def _ring(chart: Chart, fld: Field) -> Ring:
    return chart.ring.with_field(fld)


def _lift(p: Poly, R: Ring) -> Poly:
    if p.ring.field is not R.field:
        p = p.map_field(R.field)
    return p if p.ring == R else Poly(R, p.to_ring(R.with_field(p.ring.field)).terms)


def _helper_relation(chart: Chart, v: str) -> Poly | None:
    """g when some relation reads v*g + 1 with g free of v (so v = 1/g)."""
    R = chart.ring
    i = R.index(v)
    for r in chart.relations:
        if r.degree(v) != 1 or r.constant_term() != 1:
            continue
        g = {}
        ok = True
        for e, c in r.terms.items():
            if e[i] == 1:
                g[e[:i] + (0,) + e[i + 1:]] = c
            elif any(e):
                ok = False
        if ok and g:
            return Poly(R, g)
    return None


@dataclass(frozen=True, eq=False)
class Derivation:
    """Images D(v) of chart variables, per chart, with coefficients in ``field``.

    Variables v defined by a relation v*g + 1 = 0 may be omitted; then
    D(v) = v^2 D(g).
    """

    atlas: SurfaceAtlas
    images: Mapping[str, Mapping[str, Poly]]
    field: Field
    name: str = "D"

    @staticmethod
    def build(atlas: SurfaceAtlas, images: Mapping[str, Mapping[str, Poly]], name: str = "D",
              fld: Field | None = None) -> "Derivation":
        fld = fld or atlas.field
        full: dict[str, dict[str, Poly]] = {}
        for ch in atlas.charts:
            R = _ring(ch, fld)
            given = {v: _lift(p, R) for v, p in images.get(ch.name, {}).items()}
            missing = [v for v in ch.names if v not in given]
            for v in missing:
                g = _helper_relation(ch, v)
                if g is None:
                    raise ValueError(f"{name}: no image for {v} on chart {ch.name}")
                gl = _lift(g, R)
                dg = R.zero()
                for w in gl.variables():
                    if w in missing:
                        raise ValueError(f"{name}: helper {v} depends on helper {w}")
                    dg = dg + gl.derivative(w) * given[w]
                given[v] = R.var(v).square() * dg
            full[ch.name] = {v: given[v] for v in ch.names}
        return Derivation(atlas, full, fld, name)

    def on(self, chart: str) -> dict[str, Poly]:
        return dict(self.images[chart])

    def to_field(self, fld: Field) -> "Derivation":
        if fld is self.field:
            return self
        imgs = {c: {v: p.map_field(fld) for v, p in m.items()} for c, m in self.images.items()}
        return Derivation(self.atlas, imgs, fld, self.name)

    def __call__(self, chart: str, f: Poly) -> Poly:
        return apply(self, chart, f)

    def __repr__(self) -> str:
        return f"Derivation({self.name})"


def apply(D: Derivation, chart: str, f: Poly) -> Poly:
    """Chain rule: sum over variables of df/dv * D(v)."""
    imgs = D.images[chart]
    R = next(iter(imgs.values())).ring
    f = _lift(f, R)
    acc = R.zero()
    for v in f.variables():
        dv = f.derivative(v)
        if dv:
            acc = acc + dv * imgs[v]
    return acc


def _unify(*ds: Derivation) -> list[Derivation]:
    d = lcm(*(x.field.degree for x in ds))
    W = next((x.field for x in ds if x.field.degree == d), None) or gf(d)
    return [x.to_field(W) for x in ds]


def square(D: Derivation) -> Derivation:
    imgs = {c: {v: apply(D, c, p) for v, p in m.items()} for c, m in D.images.items()}
    return Derivation(D.atlas, imgs, D.field, f"{D.name}^2")


def bracket(D: Derivation, E: Derivation) -> Derivation:
    D, E = _unify(D, E)
    imgs = {c: {v: apply(D, c, E.images[c][v]) + apply(E, c, D.images[c][v]) for v in m}
            for c, m in D.images.items()}
    return Derivation(D.atlas, imgs, D.field, f"[{D.name},{E.name}]")


def _value(a, fld: Field) -> int:
    if isinstance(a, FieldElement):
        return embedder(a.field, fld)(a.value)
    return a & 1


def combine(terms: Sequence[tuple], name: str = "D") -> Derivation:
    """Linear combination sum(c * D) with scalars FieldElement or 0/1."""
    ds = [d for _, d in terms]
    degs = [d.field.degree for d in ds] + [c.field.degree for c, _ in terms if isinstance(c, FieldElement)]
    W = gf(lcm(*degs))
    ds = [d.to_field(W) for d in ds]
    out = {}
    for ch in ds[0].atlas.charts:
        R = _ring(ch, W)
        m = {}
        for v in ch.names:
            acc = R.zero()
            for (c, _), d in zip(terms, ds):
                cv = _value(c, W)
                if cv:
                    acc = acc + d.images[ch.name][v].scale(cv)
            m[v] = acc
        out[ch.name] = m
    return Derivation(ds[0].atlas, out, W, name)


# --- checks --------------------------------------------------------------

def well_defined(D: Derivation, chart: str | None = None) -> tuple[bool, str | None]:
    """D(F) lies in the relation ideal for every relation F (all charts if None)."""
    charts = [D.atlas.chart(chart)] if chart else D.atlas.charts
    for ch in charts:
        gb = chart_ideal(ch, D.field)
        for F in ch.relations:
            r = gb.reduce(apply(D, ch.name, F).cleared())
            if not r.is_zero():
                return False, f"{ch.name}: {D.name}({F}) has normal form {r}"
    return True, None


def transition_compatible(D: Derivation, T: TransitionMap) -> tuple[bool, str | None]:
    """D(phi(v)) = phi(D(v)) on the overlap for every target variable v."""
    atlas = D.atlas
    src, dst = atlas.chart(T.source), atlas.chart(T.target)
    W = D.field
    R = T.overlap_ring(src).with_field(W)
    base_gb = _overlap_ideal(T, src)
    gb = GroebnerBasis(R, [Poly(R, p.map_field(W).terms) for p in base_gb.polys], base_gb.order, [])
    imgs_src = {v: Poly(R, p.terms) for v, p in D.images[src.name].items()}
    phi = {v: Poly(R, p.to_ring(T.overlap_ring(src)).map_field(W).terms) for v, p in T.images.items()}
    for v in dst.names:
        left = R.zero()
        for w in phi[v].variables():
            left = left + phi[v].derivative(w) * imgs_src[w]
        right = D.images[dst.name][v].substitute(phi, R)
        diff = (left + right).cleared()
        r = gb.reduce(diff)
        if not r.is_zero():
            return False, f"{T.source}->{T.target}: {v} (difference {r})"
    return True, None


# --- basis coordinates ---------------------------------------------------

@dataclass(frozen=True)
class BasisCoordinates:
    alpha: FieldElement
    beta: FieldElement

    def __iter__(self):
        return iter((self.alpha, self.beta))


def _solve2(W: Field, rows: list[tuple[int, int, int]]) -> tuple[int, int]:
    """Solve a*x + b*y = c for all rows; unique solution or an error."""
    M = [list(r) for r in rows if any(r)]
    rank = 0
    piv_cols = []
    for col in range(2):
        p = next((i for i in range(rank, len(M)) if M[i][col]), None)
        if p is None:
            continue
        M[rank], M[p] = M[p], M[rank]
        inv = W.inv(M[rank][col])
        M[rank] = [W.mul(x, inv) for x in M[rank]]
        for i in range(len(M)):
            if i != rank and M[i][col]:
                f = M[i][col]
                M[i] = [a ^ W.mul(f, b) for a, b in zip(M[i], M[rank])]
        piv_cols.append(col)
        rank += 1
    for r in M[rank:]:
        if r[2]:
            raise NotInSpan("not in span")
    if rank < 2:
        raise DegenerateBasis("basis degenerate")
    return M[0][2], M[1][2]


def express_in_basis(E: Derivation, D1: Derivation, D2: Derivation) -> BasisCoordinates:
    E, D1, D2 = _unify(E, D1, D2)
    W = E.field
    rows = []
    for ch in E.atlas.charts:
        gb = chart_ideal(ch, W)
        for v in ch.names:
            polys = [D1.images[ch.name][v], D2.images[ch.name][v], E.images[ch.name][v]]
            mins = [0] * ch.ring.nvars
            for p in polys:
                for i, m in enumerate(p.min_exponents() if p else mins):
                    mins[i] = min(mins[i], m)
            shift = tuple(-m for m in mins)
            nfs = [gb.reduce(p.mul_monomial(shift)) for p in polys]
            keys = set().union(*(nf.terms for nf in nfs))
            for k in sorted(keys):
                rows.append(tuple(nf.terms.get(k, 0) for nf in nfs))
    try:
        a, b = _solve2(W, rows)
    except NotInSpan:
        raise NotInSpan(f"{E.name} is not in the span of {D1.name}, {D2.name}") from None
    return BasisCoordinates(FieldElement(W, a), FieldElement(W, b))


@dataclass(frozen=True)
class PClosed:
    lam: FieldElement | None
    degenerate: bool = False

    @property
    def closed(self) -> bool:
        return self.lam is not None

    @property
    def kind(self) -> str:
        if self.lam is None:
            return "not p-closed"
        return "multiplicative" if self.lam.value else "additive"


def p_closed(coeffs: tuple, basis: tuple[Derivation, Derivation]) -> PClosed:
    """lambda with D^2 = lambda D for D = e1 D1 + e2 D2, over constants."""
    D1, D2 = basis
    e1, e2 = coeffs
    D = combine([(e1, D1), (e2, D2)])
    W = D.field
    v1, v2 = _value(e1, W), _value(e2, W)
    if not v1 and not v2:
        return PClosed(FieldElement(W, 0), True)
    a, b = express_in_basis(square(D), D1, D2)
    a, b = _value(a, W), _value(b, W)
    lam = W.div(a, v1) if v1 else W.div(b, v2)
    if W.mul(lam, v1) != a or W.mul(lam, v2) != b:
        return PClosed(None)
    return PClosed(FieldElement(W, lam))


# --- fixed loci ----------------------------------------------------------

def fix_ideal(D: Derivation, chart: str) -> GroebnerBasis:
    ch = D.atlas.chart(chart)
    R = _ring(ch, D.field)
    gens = [_lift(r, R) for r in ch.relations] + [p.cleared() for p in D.images[chart].values() if p]
    return saturate_inverted(gens, R)


def is_fixed_point_free(D: Derivation) -> bool:
    return all(fix_ideal(D, ch.name).is_unit() for ch in D.atlas.charts)


def fixed_degree_at(D: Derivation, point: ClosedPoint) -> int:
    """Length of the local ring of the fixed scheme at ``point``."""
    ch = D.atlas.chart(point.chart)
    Dw = D.to_field(point.field) if point.field.degree % D.field.degree == 0 else D
    R = Ring(point.field, ch.names, frozenset())
    gens = [Poly(R, r.map_field(point.field).terms) for r in ch.relations]
    gens += [Poly(R, p.cleared().terms) for p in Dw.images[ch.name].values() if p]
    moved = [g.translate(point.as_dict()) for g in gens]
    return local_length(moved)


def canonical_line(point: ClosedPoint, basis: tuple[Derivation, Derivation]):
    """[e1:e2] spanning the derivations that vanish at ``point``; None at a
    point fixed only by 0."""
    D1, D2 = (d.to_field(point.field) for d in basis)
    W = point.field
    vals = point.as_dict()
    rows = []
    for v in D1.images[point.chart]:
        a = D1.images[point.chart][v].evaluate(vals).value
        b = D2.images[point.chart][v].evaluate(vals).value
        if a or b:
            rows.append((a, b))
    if not rows:
        raise DegenerateBasis(f"both basis derivations vanish at {point}")
    a, b = rows[0]
    for c, d in rows[1:]:
        if W.mul(a, d) != W.mul(b, c):
            return None
    # kernel of (e1, e2) -> a e1 + b e2
    if b == 0:
        return (FieldElement(W, 0), FieldElement(W, 1))
    return (FieldElement(W, 1), FieldElement(W, W.div(a, b)))


# --- tangent fibers ------------------------------------------------------

@dataclass(frozen=True)
class TangentFiber:
    value: FieldElement | None  # None: the fiber at infinity (s = 0)
    multiplicity: int

    def format(self) -> str:
        v = "inf" if self.value is None else str(self.value)
        if "+" in v and self.multiplicity > 1:
            v = f"({v})"
        return v if self.multiplicity == 1 else f"{v}^{self.multiplicity}"


def _base_image(D: Derivation, chart: Chart) -> list[int]:
    img = D.images[chart.name][chart.base]
    others = img.variables() - {chart.base}
    if others or img.is_laurent():
        raise ValueError(f"{D.name}({chart.base}) = {img} is not a polynomial in {chart.base}")
    return from_poly(img) if img else []


def tangent_fibers(D: Derivation) -> list[TangentFiber] | str:
    """Zeros of D(t) on the base, with s = 0 at infinity; "all" if D(t) = 0."""
    atlas = D.atlas
    finite = next((c for c in atlas.charts if c.base and not c.base_at_infinity), None)
    infinite = next((c for c in atlas.charts if c.base and c.base_at_infinity), None)
    if finite is None:
        raise ValueError("no base coordinate declared")
    u = _base_image(D, finite)
    if not u:
        return "all"
    W = D.field
    out = []
    facs = factor(W, u)
    d = lcm(W.degree, *((len(f) - 1) * W.degree for f, _ in facs))
    K = gf(d) if d != W.degree else W
    emb = embedder(W, K)
    for f, m in facs:
        fk = [emb(c) for c in f]
        for g, m2 in factor(K, fk):
            out.append(TangentFiber(FieldElement(K, g[0]), m * m2))
    if infinite is not None:
        us = _base_image(D, infinite)
        k = 0
        while k < len(us) and us[k] == 0:
            k += 1
        if us and k:
            out.append(TangentFiber(None, k))
    out.sort(key=lambda f: (f.value is None, f.value.value if f.value else 0))
    return out
