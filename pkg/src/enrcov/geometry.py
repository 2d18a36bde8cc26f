"""Affine atlases of surfaces, their singular points and local jet models."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property
from itertools import combinations, product
from math import lcm
from typing import Mapping, Sequence

from .gf2k import Field, FieldElement, embedder, extension, poly2_str
from .groebner import (GroebnerBasis, krull_dimension, saturate_inverted,
                       solve_zero_dim)
from .poly import Poly, Ring

__all__ = [
    "Chart", "TransitionMap", "SurfaceAtlas", "ClosedPoint", "LocalModel", "Report",
    "validate_chart", "validate_transition", "validate_atlas", "singular_locus",
    "singular_points", "local_model", "NotSingular", "NotHypersurface",
    "weierstrass_coefficients", "hasse_coefficient_at_fiber", "NotWeierstrass",
    "quadric_pair_hasse",
    "projective_point_count", "jacobian", "determinant",
]

DEFAULT_JET_ORDER = 24


class NotSingular(ValueError):
    pass


class NotHypersurface(ValueError):
    pass


class NotWeierstrass(ValueError):
    pass


@dataclass
class Report:
    ok: bool
    problems: list[str] = dc_field(default_factory=list)
    info: dict = dc_field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.ok


# --- charts --------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Chart:
    """An affine piece: relations in a ring whose inverted variables are units.

    ``base`` names the fibration coordinate (if any) and ``base_at_infinity``
    says it is s = 1/t rather than t.
    """

    name: str
    ring: Ring
    relations: tuple[Poly, ...]
    base: str | None = None
    base_at_infinity: bool = False
    expected_dim: int = 2

    def __post_init__(self):
        rel = tuple(r if r.ring == self.ring else r.to_ring(self.ring) for r in self.relations)
        object.__setattr__(self, "relations", rel)

    @cached_property
    def ideal(self) -> GroebnerBasis:
        """The relation ideal saturated at the inverted variables."""
        return saturate_inverted(self.relations, self.ring)

    @property
    def names(self) -> tuple[str, ...]:
        return self.ring.names

    def __repr__(self) -> str:
        return f"Chart({self.name}: {', '.join(map(str, self.relations))})"


@dataclass(frozen=True, eq=False)
class TransitionMap:
    """Target coordinates expressed on the overlap inside the source chart.

    ``overlap`` lists source variables that are additionally inverted there.
    """

    source: str
    target: str
    images: Mapping[str, Poly]
    overlap: frozenset[str] = frozenset()

    def overlap_ring(self, src: Chart) -> Ring:
        return src.ring.with_inverted(self.overlap)

    def in_domain(self, src: Chart, point: "ClosedPoint") -> bool:
        return all(point.value(n) != 0 for n in self.overlap)

    def apply(self, src: Chart, dst: Chart, point: "ClosedPoint") -> "ClosedPoint":
        R = self.overlap_ring(src)
        vals = point.as_dict()
        coords = []
        for n in dst.names:
            img = self.images[n]
            img = Poly(R, (img if img.ring.names == R.names else img.to_ring(R)).terms)
            coords.append(img.map_field(point.field).evaluate(vals).value)
        return _point(dst, point.field, coords)


@dataclass(frozen=True, eq=False)
class SurfaceAtlas:
    name: str
    charts: tuple[Chart, ...]
    transitions: tuple[TransitionMap, ...] = ()

    def chart(self, name: str) -> Chart:
        for c in self.charts:
            if c.name == name:
                return c
        raise KeyError(f"no chart {name!r}")

    def chart_index(self, name: str) -> int:
        return [c.name for c in self.charts].index(name)

    def transition(self, source: str, target: str) -> TransitionMap | None:
        for t in self.transitions:
            if t.source == source and t.target == target:
                return t
        return None

    @property
    def field(self) -> Field:
        return self.charts[0].ring.field


@dataclass(frozen=True)
class ClosedPoint:
    chart: str
    field: Field
    coords: tuple[int, ...]
    names: tuple[str, ...] = ()

    def value(self, name: str) -> int:
        return self.coords[self.names.index(name)] if self.names else None

    def as_dict(self) -> dict[str, int]:
        return dict(zip(self.names, self.coords))

    def format(self) -> str:
        inner = ", ".join(f"{n}={poly2_str(v) if self.field.degree > 1 else v}"
                          for n, v in zip(self.names, self.coords))
        return f"{self.chart}({inner})"

    def __str__(self) -> str:
        return self.format()


def _point(chart: Chart, fld: Field, coords) -> ClosedPoint:
    return ClosedPoint(chart.name, fld, tuple(coords), chart.names)


# --- linear algebra over polynomials -------------------------------------

def determinant(M: Sequence[Sequence[Poly]]) -> Poly:
    n = len(M)
    if n == 1:
        return M[0][0]
    if n == 2:
        return M[0][0] * M[1][1] + M[0][1] * M[1][0]
    acc = None
    for j in range(n):
        if M[0][j].is_zero():
            continue
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        term = M[0][j] * determinant(minor)
        acc = term if acc is None else acc + term
    return acc if acc is not None else M[0][0].ring.zero()


def jacobian(polys: Sequence[Poly], names: Sequence[str]) -> list[list[Poly]]:
    return [[p.derivative(n) for n in names] for p in polys]


# --- validation ----------------------------------------------------------

def validate_chart(chart: Chart) -> Report:
    n, c = chart.ring.nvars, len(chart.relations)
    rep = Report(True)
    if c < 1:
        rep.problems.append("no relations")
    for r in chart.relations:
        if r.is_laurent():
            rep.problems.append(f"relation {r} has denominators")
    gb = chart.ideal
    dim = krull_dimension(gb)
    rep.info.update(nvars=n, nrelations=c, dimension=dim)
    if gb.is_unit():
        rep.problems.append("empty chart (relations generate the unit ideal)")
    elif dim != n - c:
        rep.problems.append(f"not a complete intersection: dimension {dim} != {n} - {c}")
    if dim != chart.expected_dim:
        rep.problems.append(f"dimension {dim}, expected {chart.expected_dim}")
    rep.ok = not rep.problems
    return rep


def _pullback(poly: Poly, T: TransitionMap, src: Chart) -> Poly:
    R = T.overlap_ring(src)
    imgs = {n: Poly(R, p.to_ring(R).terms) if p.ring != R else p for n, p in T.images.items()}
    return poly.substitute(imgs, R)


def _overlap_ideal(T: TransitionMap, src: Chart) -> GroebnerBasis:
    R = T.overlap_ring(src)
    return saturate_inverted([r.to_ring(R) for r in src.relations], R)


def validate_transition(atlas: SurfaceAtlas, T: TransitionMap) -> Report:
    """Target relations pull back into the source ideal; units stay units;
    a declared reverse map composes to the identity."""
    src, dst = atlas.chart(T.source), atlas.chart(T.target)
    rep = Report(True)
    missing = [n for n in dst.names if n not in T.images]
    if missing:
        rep.ok = False
        rep.problems.append(f"no image for {', '.join(missing)}")
        return rep
    R = T.overlap_ring(src)
    gb = _overlap_ideal(T, src)
    for rel in dst.relations:
        pb = _pullback(rel, T, src).cleared()
        rem = gb.reduce(pb)
        if not rem.is_zero():
            rep.problems.append(f"relation {rel} does not pull back (remainder {rem})")
    for n in dst.ring.inverted:
        img = T.images[n].to_ring(R)
        test = saturate_inverted(list(gb.polys) + [img.cleared()], R)
        if not test.is_unit():
            rep.problems.append(f"image of inverted {n} is not a unit on the overlap")
    back = atlas.transition(T.target, T.source)
    if back is not None:
        for n in src.names:
            comp = _pullback(back.images[n].to_ring(back.overlap_ring(dst)), T, src)
            diff = (comp + R.var(n)).cleared()
            if not gb.reduce(diff).is_zero():
                rep.problems.append(f"round trip through {T.target} moves {n} to {comp}")
    rep.ok = not rep.problems
    return rep


def validate_atlas(atlas: SurfaceAtlas) -> Report:
    rep = Report(True)
    for c in atlas.charts:
        r = validate_chart(c)
        rep.problems += [f"{c.name}: {p}" for p in r.problems]
    for T in atlas.transitions:
        r = validate_transition(atlas, T)
        rep.problems += [f"{T.source}->{T.target}: {p}" for p in r.problems]
    # connectivity of the undirected transition graph
    seen = {atlas.charts[0].name}
    frontier = [atlas.charts[0].name]
    while frontier:
        a = frontier.pop()
        for T in atlas.transitions:
            for x, y in ((T.source, T.target), (T.target, T.source)):
                if x == a and y not in seen:
                    seen.add(y)
                    frontier.append(y)
    if len(seen) != len(atlas.charts):
        rep.problems.append("transition graph is not connected")
    rep.ok = not rep.problems
    return rep


# --- singular locus ------------------------------------------------------

def singular_locus(chart: Chart) -> GroebnerBasis:
    """Relations plus the maximal minors of their Jacobian, saturated at
    the inverted variables."""
    c = len(chart.relations)
    J = jacobian(chart.relations, chart.names)
    minors = []
    for cols in combinations(range(chart.ring.nvars), c):
        d = determinant([[row[j] for j in cols] for row in J])
        if not d.is_zero():
            minors.append(d)
    return saturate_inverted(list(chart.relations) + minors, chart.ring)


def singular_points(atlas: SurfaceAtlas, max_ext_degree: int = 4) -> list[ClosedPoint]:
    """Deduplicated singular points in chart declaration order.

    All points share one field: the smallest extension containing every
    solution and GF(4).
    """
    base = atlas.field
    found = []
    degs = [2]
    for ch in atlas.charts:
        gb = singular_locus(ch)
        if gb.is_unit():
            continue
        sol = solve_zero_dim(list(gb.polys), max_ext_degree=max_ext_degree)
        found.append((ch, sol))
        degs.append(sol.field.degree // base.degree)
    W = extension(base, lcm(*degs))
    out: list[ClosedPoint] = []
    for ch, sol in found:
        emb = embedder(sol.field, W)
        for coords in sorted(tuple(emb(v) for v in p) for p in sol.points):
            p = _point(ch, W, coords)
            if not _is_duplicate(atlas, p, out):
                out.append(p)
    return out


def _is_duplicate(atlas: SurfaceAtlas, p: ClosedPoint, accepted: list[ClosedPoint]) -> bool:
    me = atlas.chart(p.chart)
    for q in accepted:
        if q.chart == p.chart:
            if q.coords == p.coords:
                return True
            continue
        other = atlas.chart(q.chart)
        T = atlas.transition(p.chart, q.chart)
        if T is not None and T.in_domain(me, p) and T.apply(me, other, p).coords == q.coords:
            return True
        T = atlas.transition(q.chart, p.chart)
        if T is not None and T.in_domain(other, q) and T.apply(other, me, q).coords == p.coords:
            return True
    return False


# --- local models --------------------------------------------------------

@dataclass(frozen=True)
class LocalModel:
    names: tuple[str, ...]
    jet: Poly
    order: int
    point: ClosedPoint
    eliminated: tuple[str, ...] = ()
    trace: tuple[str, ...] = ()
    exact: bool = False  # jet is the full power series, not a truncation


def _truncate(p: Poly, N: int) -> Poly:
    return Poly(p.ring, {e: c for e, c in p.terms.items() if sum(e) < N})


def _rank(F: Field, M: list[list[int]]) -> int:
    M = [row[:] for row in M]
    r = 0
    cols = len(M[0]) if M else 0
    for j in range(cols):
        piv = next((i for i in range(r, len(M)) if M[i][j]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = F.inv(M[r][j])
        M[r] = [F.mul(v, inv) for v in M[r]]
        for i in range(len(M)):
            if i != r and M[i][j]:
                f = M[i][j]
                M[i] = [a ^ F.mul(f, b) for a, b in zip(M[i], M[r])]
        r += 1
    return r


def _inverse(F: Field, M: list[list[int]]) -> list[list[int]]:
    n = len(M)
    A = [row[:] + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(M)]
    for j in range(n):
        piv = next(i for i in range(j, n) if A[i][j])
        A[j], A[piv] = A[piv], A[j]
        inv = F.inv(A[j][j])
        A[j] = [F.mul(v, inv) for v in A[j]]
        for i in range(n):
            if i != j and A[i][j]:
                f = A[i][j]
                A[i] = [a ^ F.mul(f, b) for a, b in zip(A[i], A[j])]
    return [row[n:] for row in A]


def local_model(atlas: SurfaceAtlas, point: ClosedPoint, order: int = DEFAULT_JET_ORDER) -> LocalModel:
    """Hypersurface jet at a singular point, to total degree < ``order``.

    Complete-intersection charts are reduced by solving all but one relation
    for as many variables with Newton iteration.
    """
    chart = atlas.chart(point.chart)
    W = point.field
    R0 = Ring(W, chart.names, frozenset())
    rels = [Poly(R0, r.map_field(W).terms).translate(point.as_dict()) for r in chart.relations]
    c = len(rels)
    lin = [[r.coefficient(tuple(1 if k == i else 0 for k in range(R0.nvars))).value
            for i in range(R0.nvars)] for r in rels]
    rank = _rank(W, lin)
    if rank == c:
        raise NotSingular(f"point not singular: {point}")
    if rank < c - 1:
        raise NotHypersurface(f"Jacobian rank {rank} < {c - 1} at {point}")
    trace = []
    if c == 1:
        keep = chart.names
        elim_vars: tuple[str, ...] = ()
        F = _truncate(rels[0], order)
        exact = rels[0].total_degree() < order
    else:
        choice = None
        # prefer eliminating late variables (unit helpers are declared last)
        for rows in combinations(range(c), c - 1):
            for cols in combinations(reversed(range(R0.nvars)), c - 1):
                sub = [[lin[i][j] for j in cols] for i in rows]
                if _rank(W, sub) == c - 1:
                    choice = (rows, cols)
                    break
            if choice:
                break
        rows, cols = choice
        elim_vars = tuple(R0.names[j] for j in cols)
        keep = tuple(n for n in R0.names if n not in elim_vars)
        sol = _newton(W, R0, [rels[i] for i in rows], elim_vars, keep, order, trace)
        rest = next(i for i in range(c) if i not in rows)
        K = Ring(W, keep, frozenset())
        exact = not (rels[rest].variables() & set(elim_vars)) and rels[rest].total_degree() < order
        F = _truncate(rels[rest].substitute(sol, K), order)
        # elimination invariant: solved relations vanish to the jet order
        for i in rows:
            chk = _truncate(rels[i].substitute(sol, K), order)
            assert chk.is_zero(), f"Newton residual {chk}"
    K = Ring(W, tuple(keep), frozenset())
    F = Poly(K, F.to_ring(K).terms) if F.ring != K else F
    if F.is_zero() or F.order() < 2:
        raise NotSingular(f"point not singular: {point}")
    return LocalModel(tuple(keep), F, order, point, elim_vars, tuple(trace), exact)


def _newton(W: Field, R0: Ring, eqs: list[Poly], elim: tuple[str, ...], keep: tuple[str, ...],
            N: int, trace: list[str]) -> dict[str, Poly]:
    """Series v(w) with eqs(w, v(w)) = 0 mod m^N and v(0) = 0."""
    K = Ring(W, keep, frozenset())
    k = len(elim)
    J0 = [[e.derivative(v).evaluate({n: 0 for n in R0.names}).value for v in elim] for e in eqs]
    J0inv = _inverse(W, J0)
    sol = {v: K.zero() for v in elim}
    jac = [[e.derivative(v) for v in elim] for e in eqs]
    prec = 1
    while True:
        prec = min(2 * prec, N)
        G = [_truncate(e.substitute(sol, K), prec) for e in eqs]
        M = [[_truncate(d.substitute(sol, K), prec) for d in row] for row in jac]
        # M^{-1} = (I + J0inv (M - J0))^{-1} J0inv, expanded as a Neumann series
        E = [[sum((K.const(J0inv[i][l]) * (M[l][j] + K.const(J0[l][j])) for l in range(k)), K.zero())
              for j in range(k)] for i in range(k)]
        S = [[K.one() if i == j else K.zero() for j in range(k)] for i in range(k)]
        P = [row[:] for row in S]
        for _ in range(prec):
            P = [[_truncate(sum((P[i][l] * E[l][j] for l in range(k)), K.zero()), prec)
                  for j in range(k)] for i in range(k)]
            if all(x.is_zero() for row in P for x in row):
                break
            S = [[S[i][j] + P[i][j] for j in range(k)] for i in range(k)]
        Minv = [[sum((S[i][l] * K.const(J0inv[l][j]) for l in range(k)), K.zero())
                 for j in range(k)] for i in range(k)]
        step = [_truncate(sum((Minv[i][j] * G[j] for j in range(k)), K.zero()), prec) for i in range(k)]
        sol = {v: sol[v] + step[i] for i, v in enumerate(elim)}
        trace.append(f"precision {prec}")
        if prec >= N:
            G = [_truncate(e.substitute(sol, K), N) for e in eqs]
            if all(g.is_zero() for g in G):
                return sol
            if len(trace) > 4 * N:
                raise AssertionError("Newton iteration did not converge")


# --- fibers --------------------------------------------------------------

_WEIERSTRASS = {(1, 1): "a1", (0, 1): "a3", (2, 0): "a2", (1, 0): "a4", (0, 0): "a6"}


def weierstrass_coefficients(rel: Poly, x: str = "x", y: str = "y") -> dict[str, Poly]:
    """Coefficients of y^2 + a1 xy + a3 y + x^3 + a2 x^2 + a4 x + a6.

    Raises NotWeierstrass unless the relation has exactly that shape with
    unit-free leading terms y^2 and x^3.
    """
    R = rel.ring
    ix, iy = R.index(x), R.index(y)
    coeffs: dict[str, dict] = {k: {} for k in _WEIERSTRASS.values()}
    lead = {(0, 2): {}, (3, 0): {}}
    for e, c in rel.terms.items():
        k = (e[ix], e[iy])
        rest = tuple(0 if i in (ix, iy) else v for i, v in enumerate(e))
        if k in lead:
            lead[k][rest] = c
        elif k in _WEIERSTRASS:
            coeffs[_WEIERSTRASS[k]][rest] = c
        else:
            raise NotWeierstrass(f"term {x}^{k[0]}*{y}^{k[1]} outside Weierstrass shape")
    one = (0,) * R.nvars
    for k, t in lead.items():
        if t != {one: 1}:
            raise NotWeierstrass("leading terms y^2 and x^3 must have coefficient 1")
    return {k: Poly(R, v) for k, v in coeffs.items()}


def hasse_coefficient_at_fiber(chart: Chart, value, x: str = "x", y: str = "y") -> FieldElement:
    """a1 of the Weierstrass relation on the fiber base = value.

    In characteristic 2 a smooth fiber is ordinary iff this is nonzero.
    """
    if chart.base is None:
        raise NotWeierstrass(f"chart {chart.name} has no base coordinate")
    rel = next((r for r in chart.relations if r.degree(y) == 2), None)
    if rel is None:
        raise NotWeierstrass(f"no relation quadratic in {y} on {chart.name}")
    a1 = weierstrass_coefficients(rel, x, y)["a1"]
    fld = value.field if isinstance(value, FieldElement) else chart.ring.field
    v = value.value if isinstance(value, FieldElement) else value
    a1 = a1.map_field(fld)
    others = a1.variables() - {chart.base}
    if others:
        raise NotWeierstrass(f"a1 = {a1} depends on {sorted(others)}")
    if a1.is_laurent():
        raise NotWeierstrass(f"a1 = {a1} has a pole on the base")
    # the Weierstrass model lives over the whole base line, so inverted
    # chart variables play no role here
    a1 = Poly(Ring(fld, a1.ring.names, frozenset()), a1.terms)
    pt = {n: (v if n == chart.base else 1) for n in a1.ring.names}
    return a1.evaluate(pt)


def quadric_pair_hasse(chart: Chart, value) -> FieldElement:
    """Hasse invariant of the fiber base = value of a chart whose fiber is
    an affine piece of two quadrics in P^3.

    For quadrics Q1, Q2 in P^3 over a field of characteristic 2 the curve
    Q1 = Q2 = 0 is ordinary iff the coefficient of x0 x1 x2 x3 in Q1 Q2 is
    nonzero.  On the affine piece h = 1 every term of Q1 Q2 whose fiber
    exponent is (1, 1, 1) carries h to the first power, so the coefficient
    can be read off without homogenising.
    """
    fib = [n for n in chart.names if n != chart.base]
    if chart.base is None or len(fib) != 3 or len(chart.relations) != 2:
        raise NotWeierstrass(f"chart {chart.name} is not a pencil of quadric pairs")
    fld = value.field if isinstance(value, FieldElement) else chart.ring.field
    v = value.value if isinstance(value, FieldElement) else value
    R = Ring(fld, tuple(fib), frozenset())
    qs = []
    for rel in chart.relations:
        q = rel.map_field(fld).substitute({chart.base: R.const(v), **{n: R.var(n) for n in fib}}, R)
        if q.total_degree() > 2:
            raise NotWeierstrass(f"relation {rel} has degree > 2 in {fib}")
        qs.append(q)
    return (qs[0] * qs[1]).coefficient((1, 1, 1))


def projective_point_count(polys: Sequence[Poly], fld: Field) -> int:
    """Number of GF(q)-points of the projective scheme cut out by homogeneous polys."""
    R = polys[0].ring
    n = R.nvars
    ps = [p.map_field(fld) for p in polys]
    count = 0
    for lead in range(n):
        # representatives with first nonzero coordinate = 1 at position lead
        for tail in product(range(fld.order), repeat=n - lead - 1):
            pt = (0,) * lead + (1,) + tail
            if all(p.evaluate(pt).value == 0 for p in ps):
                count += 1
    return count
