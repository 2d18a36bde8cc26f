"""Classification of double points in characteristic 2.

A-type points are recognised from the rank of the alternating form of the
quadratic part; the index is the length of k[[x,y,z]]/(F, F_x, F_y) - 1 in
coordinates where z spans the radical.  Otherwise the point is tested for
E12 by weighted normalisation, and failing that, its Dynkin type is read off
from the blow-up (children types plus Tjurina number), with the coindex
fixed by matching Tjurina numbers against Artin's normal forms.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Sequence

from .gf2k import Field, embedder, gf
from .local import NonIsolated, local_length
from .poly import Poly, Ring
from .univariate import factor, roots

__all__ = [
    "SingClass", "Smooth", "Unclassified", "JetTooShort", "TableAmbiguity", "QuadraticBranch",
    "quadratic_analysis", "split_hyperbolic", "tjurina", "blowup_charts", "dynkin_via_blowup",
    "coindex", "detect_E12", "classify_jet", "classify_point", "image_type", "lift_to_cover",
    "NormalFormTable", "normal_form_table", "build_table", "Jet", "weierstrass_prepare", "CannotAppear", "parse_class", "parse_multiset",
    "format_multiset",
]

XYZ = ("x", "y", "z")


class JetTooShort(ValueError):
    """The jet order does not determine the answer; retry with a longer jet."""


class TableAmbiguity(AssertionError):
    pass


# --- classes -------------------------------------------------------------

@dataclass(frozen=True)
class SingClass:
    kind: str  # Smooth | A | D | E | EDP_E12 | Unclassified
    n: int = 0
    r: int | None = None
    reason: str = ""

    @property
    def index(self) -> int:
        if self.kind in ("A", "D", "E"):
            return self.n
        if self.kind == "EDP_E12":
            return 12
        return 0

    @property
    def dynkin(self) -> "SingClass":
        return SingClass(self.kind, self.n) if self.kind in "ADE" else self

    def __str__(self) -> str:
        if self.kind == "A":
            return f"A({self.n})"
        if self.kind in ("D", "E"):
            return f"{self.kind}({self.n})" if self.r is None else f"{self.kind}({self.n},{self.r})"
        if self.kind == "Unclassified":
            return f"Unclassified({self.reason})"
        return self.kind

    def sort_key(self) -> tuple:
        order = {"Smooth": 0, "A": 1, "D": 2, "E": 3, "EDP_E12": 4, "Unclassified": 5}
        return (order[self.kind], self.n, -1 if self.r is None else self.r, self.reason)


Smooth = SingClass("Smooth")


def Unclassified(reason: str) -> SingClass:
    return SingClass("Unclassified", reason=reason)


_CLASS_RE = re.compile(r"\s*(?:(A)\((\d+)\)|([DE])\((\d+)(?:,(\d+))?\)|(EDP_E12)|(Smooth))\s*$")


def parse_class(text: str) -> SingClass:
    m = _CLASS_RE.match(text)
    if not m:
        raise ValueError(f"bad singularity class {text!r}")
    if m.group(1):
        return SingClass("A", int(m.group(2)))
    if m.group(3):
        return SingClass(m.group(3), int(m.group(4)), None if m.group(5) is None else int(m.group(5)))
    return SingClass("EDP_E12") if m.group(6) else Smooth


def parse_multiset(text: str) -> list[SingClass]:
    """'2*A(7) + 4*A(1)' or 'none'."""
    text = text.strip()
    if text in ("", "none"):
        return []
    out = []
    for part in text.split("+"):
        part = part.strip()
        k = 1
        if "*" in part:
            a, part = part.split("*", 1)
            k = int(a)
        out += [parse_class(part)] * k
    return sorted(out, key=SingClass.sort_key)


def format_multiset(items: Sequence[SingClass]) -> str:
    items = sorted(items, key=SingClass.sort_key, reverse=True)
    if not items:
        return "none"
    out = []
    i = 0
    while i < len(items):
        j = i
        while j < len(items) and items[j] == items[i]:
            j += 1
        out.append(str(items[i]) if j - i == 1 else f"{j - i}*{items[i]}")
        i = j
    return " + ".join(out)


# --- jets ----------------------------------------------------------------

@dataclass(frozen=True)
class Jet:
    """A power series in x, y, z known modulo m^order (exact: known fully)."""

    poly: Poly
    order: int
    exact: bool = False

    @staticmethod
    def of(F: Poly, order: int | None = None, exact: bool | None = None) -> "Jet":
        if F.ring.nvars != 3:
            raise ValueError("jets need three variables")
        R = Ring(F.ring.field, XYZ, frozenset())
        P = Poly(R, F.terms)
        if order is None:
            return Jet(P, max(P.total_degree() + 1, 2), True)
        if exact is None:
            exact = P.total_degree() < order
        return Jet(_trunc(P, order), order, exact)

    @property
    def field(self) -> Field:
        return self.poly.ring.field

    def with_poly(self, P: Poly, lost: int = 0) -> "Jet":
        if self.exact:
            return Jet(P, max(P.total_degree() + 1, 2), True)
        return Jet(_trunc(P, self.order - lost), self.order - lost, False)


def _trunc(P: Poly, N: int) -> Poly:
    return Poly(P.ring, {e: c for e, c in P.terms.items() if sum(e) < N})


def _homog(P: Poly, d: int) -> Poly:
    return Poly(P.ring, {e: c for e, c in P.terms.items() if sum(e) == d})


def _linear_sub(P: Poly, M: list[list[int]]) -> Poly:
    """Substitute old_i = sum_j M[i][j] * new_j."""
    R = P.ring
    g = R.gens()
    imgs = {}
    for i, n in enumerate(R.names):
        acc = R.zero()
        for j in range(3):
            if M[i][j]:
                acc = acc + g[j].scale(M[i][j])
        imgs[n] = acc
    return P.substitute(imgs, R)


# --- quadratic part ------------------------------------------------------

@dataclass(frozen=True)
class QuadraticBranch:
    branch: str  # "A" or "DE"
    rank: int
    change: tuple  # matrix M with old = M * new
    jet: Jet  # transformed jet


def quadratic_analysis(J: Jet) -> QuadraticBranch:
    F = J.poly
    if F.is_zero() or F.order() < 2:
        raise ValueError("not a singular point")
    Q = _homog(F, 2)
    if Q.is_zero():
        raise ValueError(f"multiplicity {F.order()} (not a double point)")

    def co(e):
        return Q.terms.get(e, 0)

    b12, b13, b23 = co((1, 1, 0)), co((1, 0, 1)), co((0, 1, 1))
    if b12 or b13 or b23:
        if b12:
            i, j = 0, 1
        elif b13:
            i, j = 0, 2
        else:
            i, j = 1, 2
        v = (b23, b13, b12)
        cols = [[1 if k == i else 0 for k in range(3)], [1 if k == j else 0 for k in range(3)], list(v)]
        M = [[cols[c][r] for c in range(3)] for r in range(3)]
        P = _linear_sub(F, M)
        return QuadraticBranch("A", 2, tuple(map(tuple, M)), J.with_poly(P))
    W = J.field
    l = [W.sqrt(co(tuple(2 if k == i else 0 for k in range(3)))) for i in range(3)]
    p = max(i for i in range(3) if l[i])
    others = [i for i in range(3) if i != p]
    inv = W.inv(l[p])
    # new (x, y, z) = (old_others[0], old_others[1], L); old_p = (z + sum l_i old_i) / l_p
    M = [[0] * 3 for _ in range(3)]
    M[others[0]][0] = 1
    M[others[1]][1] = 1
    M[p][0] = W.mul(l[others[0]], inv)
    M[p][1] = W.mul(l[others[1]], inv)
    M[p][2] = inv
    P = _linear_sub(F, M)
    return QuadraticBranch("DE", 0, tuple(map(tuple, M)), J.with_poly(P))


def _length(gens: Sequence[Poly]) -> int:
    try:
        return local_length(gens)
    except NonIsolated:
        return -1


def split_hyperbolic(J: Jet) -> tuple[int, SingClass]:
    """For an A-branch jet (xy-term present, z in the radical): the order m of
    the residual g(z) in F ~ xy + g(z), and the class A(m-1)."""
    F = J.poly
    m = _length([F, F.derivative("x"), F.derivative("y")])
    if m < 0:
        return 0, Unclassified("non-isolated or order exceeded")
    if not J.exact and m + 2 > J.order:
        raise JetTooShort(f"A-type residual order {m} needs a jet beyond {J.order}")
    if m < 2:
        return m, Smooth
    return m, SingClass("A", m - 1)


def tjurina(F: Poly) -> int:
    """dim k[[x,y,z]]/(F, F_x, F_y, F_z); -1 when not finite."""
    return _length([F] + [F.derivative(n) for n in F.ring.names])


def _check_determinacy(J: Jet, tau: int) -> None:
    # finite determinacy bound 2*tau - ord + 2 for contact equivalence
    if not J.exact and 2 * tau - J.poly.order() + 2 >= J.order:
        raise JetTooShort(f"Tjurina number {tau} needs jet order > {2 * tau - J.poly.order() + 2}")


# --- blow-up -------------------------------------------------------------

def blowup_charts(J: Jet) -> list[tuple[str, Jet, list[Jet]]]:
    """Strict transforms in the x-, y- and z-charts, with the jets at the
    singular points lying over the origin (DE-branch: quadratic part z^2)."""
    F = J.poly
    R = F.ring
    x, y, z = R.gens()
    out = []
    subs = {"x": {"y": x * y, "z": x * z}, "y": {"x": y * x, "z": y * z}, "z": {"x": z * x, "y": z * y}}
    for name in XYZ:
        G = F.substitute(subs[name], R)
        i = R.index(name)
        G = Poly(R, {tuple(k - 2 if j == i else k for j, k in enumerate(e)): c for e, c in G.terms.items()})
        out.append([name, J.with_poly(G, 2), []])
    cubic = _homog(F, 3)
    W = J.field
    # x-chart: points (0, c, 0) with cubic(1, c, 0) = 0
    u = [0] * 4
    for e, c in cubic.terms.items():
        if e[2] == 0:
            u[e[1]] ^= c
    while u and u[-1] == 0:
        u.pop()
    if not u:
        raise NonIsolated("singular along the exceptional curve")
    for fac, _ in factor(W, u):
        d = len(fac) - 1
        K = W if d == 1 else gf(W.degree * d)
        G = out[0][1]
        emb = embedder(W, K)
        # conjugate points share their type: keep one root and count it d times
        c = roots(K, [emb(a) for a in fac])[0]
        moved = G.with_poly(G.poly.map_field(K).translate({"y": c}))
        out[0][2].extend([moved] * d)
    # y-chart origin: cubic(0, 1, 0) = coefficient of y^3
    if cubic.terms.get((0, 3, 0), 0) == 0:
        out[1][2].append(out[1][1])
    return [tuple(o) for o in out]


# --- truncated arithmetic ------------------------------------------------

def _wdeg(e, w) -> int:
    return sum(a * b for a, b in zip(e, w))


def _tmul(a: Poly, b: Poly, w, bound: int) -> Poly:
    mul = a.ring.field.mul
    r: dict = {}
    bt = [(e, c, _wdeg(e, w)) for e, c in b.terms.items()]
    for e1, c1 in a.terms.items():
        d1 = _wdeg(e1, w)
        for e2, c2, d2 in bt:
            if d1 + d2 > bound:
                continue
            e = tuple(x + y for x, y in zip(e1, e2))
            v = r.get(e, 0) ^ mul(c1, c2)
            if v:
                r[e] = v
            else:
                r.pop(e, None)
    return Poly(a.ring, r)


def _tsub(P: Poly, imgs: dict, w, bound: int) -> Poly:
    """Substitute and drop every term of weighted degree > bound."""
    R = P.ring
    images = [imgs.get(n, R.var(n)) for n in R.names]
    cache: dict = {}

    def power(i, k):
        if (i, k) not in cache:
            cache[(i, k)] = R.one() if k == 0 else _tmul(power(i, k - 1), images[i], w, bound)
        return cache[(i, k)]

    acc = R.zero()
    for e, c in P.terms.items():
        t = R.const(c)
        for i, k in enumerate(e):
            if k:
                t = _tmul(t, power(i, k), w, bound)
        acc = acc + t
    return acc


def weierstrass_prepare(F: Poly, w=(1, 1, 1), bound: int = 11) -> tuple[Poly, Poly]:
    """(b, c) with F = unit * (z^2 + b z + c), modulo weighted degree > bound.

    Needs F(0,0,z) of order exactly 2.  Obtained by dividing z^2 by F.
    """
    R = F.ring
    W = R.field
    zi = R.index("z")

    def split(g: Poly):
        g0, g1, G = {}, {}, {}
        for e, c in g.terms.items():
            if e[zi] == 0:
                g0[e] = c
            elif e[zi] == 1:
                g1[tuple(0 if j == zi else k for j, k in enumerate(e))] = c
            else:
                G[tuple(k - 2 if j == zi else k for j, k in enumerate(e))] = c
        return Poly(R, g0), Poly(R, g1), Poly(R, G)

    f0, f1, E = split(F)
    e0 = E.constant_term()
    if not e0:
        raise ValueError("F(0,0,z) does not have order 2")
    unit = E.scale(W.inv(e0))
    eps = unit + R.one()
    inv = R.one()
    term = R.one()
    for _ in range(bound + 1):
        term = _tmul(term, eps, w, bound)
        if term.is_zero():
            break
        inv = inv + term
    inv = inv.scale(W.inv(e0))
    z = R.var("z")
    tail = f0 + _tmul(f1, z, w, bound)
    g = z * z
    r0, r1 = R.zero(), R.zero()
    for _ in range(4 * bound + 8):
        g0, g1, G = split(g)
        r0, r1 = r0 + g0, r1 + g1
        if G.is_zero():
            break
        g = _tmul(_tmul(G, inv, w, bound), tail, w, bound)
    else:
        raise ArithmeticError("Weierstrass division did not terminate")
    return r1, r0


# --- E12 recognition -----------------------------------------------------

E12_WEIGHTS = (14, 6, 21)
E12_BOUND = 70  # every x,y-monomial outside the ideal below has weight <= 56
E12_IDEAL = ((5, 0), (3, 1), (2, 3), (1, 4), (0, 9))
E12_MIN_ORDER = 12  # degree >= 12 forces weight >= 72


def _in_e12_ideal(e) -> bool:
    return any(e[0] >= a and e[1] >= b for a, b in E12_IDEAL)


def _xyw(e) -> int:
    return 14 * e[0] + 6 * e[1]


def detect_E12(J: Jet, max_steps: int = 80) -> bool:
    """Whether some coordinate change turns F into z^2 + x^3 + y^7 + eps with
    eps in (x^5, x^3 y, x^2 y^3, x y^4, y^9) (up to scaling x^3, y^7)."""
    if not J.exact and J.order < E12_MIN_ORDER:
        raise JetTooShort(f"E12 recognition needs jet order >= {E12_MIN_ORDER}")
    qa = quadratic_analysis(J)
    if qa.branch != "DE":
        return False
    R = qa.jet.poly.ring
    W = R.field
    x, y, z = R.gens()
    deg, top = (1, 1, 1), E12_MIN_ORDER - 1
    F = qa.jet.poly.truncate(top)
    for _ in range(max_steps):
        b, c = weierstrass_prepare(F, deg, top)

        def co(a, bb):
            return c.terms.get((a, bb, 0), 0)

        c30, c21, c12, c03 = co(3, 0), co(2, 1), co(1, 2), co(0, 3)
        if any(sum(e) < 3 for e in c.terms):
            return False
        if c30 == 0:
            if c21 or c12 or not c03:
                return False
            F = _tsub(F, {"x": y, "y": x}, deg, top)
            continue
        a = W.div(c21, c30)
        if c12 != W.mul(c30, W.mul(a, a)) or c03 != W.mul(c30, W.pow(a, 3)):
            return False
        if a:
            F = _tsub(F, {"x": x + y.scale(a)}, deg, top)
            continue
        d = co(1, 4)
        if d:
            F = _tsub(F, {"x": x + (y * y).scale(W.sqrt(W.div(d, c30)))}, deg, top)
            continue
        if any(_xyw(e) < 21 for e in b.terms):
            return False
        h = R.zero()
        for e, v in c.terms.items():
            if _xyw(e) < 42 and e != (3, 0, 0):
                if e[0] % 2 or e[1] % 2:
                    return False
                h = h + R.monomial((e[0] // 2, e[1] // 2, 0), W.sqrt(v))
        if h.is_zero():
            break
        F = _tsub(F, {"z": z + h}, deg, top)
    else:
        return False
    w, top = E12_WEIGHTS, E12_BOUND
    F = F.truncate(top, w)
    for _ in range(max_steps):
        b, c = weierstrass_prepare(F, w, top)
        gamma, beta = c.terms.get((3, 0, 0), 0), c.terms.get((0, 7, 0), 0)
        if not gamma or not beta:
            return False
        live = [(e, v) for e, v in b.terms.items() if _xyw(e) <= top - 21]
        if live:
            e, v = min(live, key=lambda ev: (_xyw(ev[0]), ev[0]))
            if e[0] >= 2:
                q = R.monomial((e[0] - 2, e[1], 0), W.div(v, gamma))
                F = _tsub(F, {"x": x + z * q}, w, top)
            elif e[1] >= 6:
                q = R.monomial((e[0], e[1] - 6, 0), W.div(v, beta))
                F = _tsub(F, {"y": y + z * q}, w, top)
            else:
                return False
            continue
        h = R.zero()
        for e, v in c.terms.items():
            if e in ((3, 0, 0), (0, 7, 0)) or _in_e12_ideal(e):
                continue
            if _xyw(e) < 42 or e[0] % 2 or e[1] % 2:
                return False
            h = h + R.monomial((e[0] // 2, e[1] // 2, 0), W.sqrt(v))
        if h.is_zero():
            return True
        F = _tsub(F, {"z": z + h}, w, top)
    return False


# --- normal forms and the blow-up reduction table -----------------------

@dataclass(frozen=True)
class NormalForm:
    cls: SingClass
    poly: Poly
    tau: int
    key: tuple | None  # blow-up key (children, tau) for D/E entries


@dataclass
class NormalFormTable:
    entries: list[NormalForm]
    reduction: dict  # blow-up key -> Dynkin SingClass
    e12_form: Poly
    e12_ideal: tuple = E12_IDEAL

    def forms(self, kind: str | None = None) -> list[NormalForm]:
        return [e for e in self.entries if kind is None or e.cls.kind == kind]

    def coindex(self, dynkin: SingClass, tau: int) -> int | None:
        rs = [e.cls.r for e in self.entries
              if e.cls.kind == dynkin.kind and e.cls.n == dynkin.n and e.tau == tau]
        return rs[0] if rs else None

    def has_type(self, dynkin: SingClass) -> bool:
        return any(e.cls.kind == dynkin.kind and e.cls.n == dynkin.n for e in self.entries)


_LINE = re.compile(r"^\s*([ADE])(\d+)\s+(\d+)\s*:\s*(.+?)\s*$")


def _read_asset() -> list[tuple[str, int, int, str]]:
    text = resources.files("enrcov.data").joinpath("normal_forms.txt").read_text()
    out = []
    for ln, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0]
        if not line.strip():
            continue
        m = _LINE.match(line)
        if not m:
            raise ValueError(f"normal_forms.txt line {ln}: cannot parse {line!r}")
        out.append((m.group(1), int(m.group(2)), int(m.group(3)), m.group(4)))
    return out


def _blowup_key(J: Jet, tau: int, table: NormalFormTable) -> tuple:
    kids = []
    for _, _, pts in blowup_charts(J):
        for P in pts:
            c = _classify(P, table)
            if c.kind in ("Unclassified", "EDP_E12"):
                raise _NotRDP(f"child {c}")
            if c.kind != "Smooth":
                kids.append(str(c.dynkin))
    return (tuple(sorted(kids)), tau)


class _NotRDP(Exception):
    pass


def build_table() -> NormalFormTable:
    R = Ring.make(XYZ)
    table = NormalFormTable([], {}, R.parse("z^2 + x^3 + y^7"))
    seen: dict = {}
    for kind, n, r, text in _read_asset():
        F = R.parse(text)
        tau = tjurina(F)
        if tau < 0:
            raise TableAmbiguity(f"{kind}{n}^{r}: Tjurina number not finite")
        cls = SingClass("EDP_E12") if (kind, n) == ("E", 12) else SingClass(kind, n, None if kind == "A" else r)
        key = None
        if kind in "DE" and cls.kind != "EDP_E12":
            qa = quadratic_analysis(Jet.of(F))
            key = _blowup_key(qa.jet, tau, table)
            prev = table.reduction.get(key)
            if prev is not None and prev != cls.dynkin:
                raise TableAmbiguity(f"blow-up key {key} gives both {prev} and {cls.dynkin}")
            table.reduction[key] = cls.dynkin
        if kind != "A":
            dup = seen.get((kind, n, tau))
            if dup is not None and dup != r:
                raise TableAmbiguity(f"{kind}{n}: coindices {dup} and {r} share Tjurina number {tau}")
            seen[(kind, n, tau)] = r
        table.entries.append(NormalForm(cls, F, tau, key))
    return table


@lru_cache(maxsize=1)
def normal_form_table() -> NormalFormTable:
    return build_table()


def dynkin_via_blowup(J: Jet, tau: int, table: NormalFormTable | None = None) -> SingClass:
    table = table or normal_form_table()
    try:
        key = _blowup_key(J, tau, table)
    except NonIsolated as exc:
        return Unclassified(f"blow-up: {exc}")
    except _NotRDP as exc:
        return Unclassified(f"blow-up: {exc}")
    hit = table.reduction.get(key)
    if hit is None:
        kids = " + ".join(key[0]) or "smooth"
        return Unclassified(f"no table entry for children {kids}, tau {tau}")
    return hit


def coindex(dynkin: SingClass, tau: int, table: NormalFormTable | None = None) -> SingClass:
    table = table or normal_form_table()
    r = table.coindex(dynkin, tau)
    if r is None:
        return Unclassified(f"no coindex of {dynkin} has Tjurina number {tau}")
    return SingClass(dynkin.kind, dynkin.n, r)


# --- pipeline -------------------------------------------------------------

def _tjurina_checked(J: Jet) -> int:
    """tau(F), refusing answers that the jet order cannot certify."""
    from .local import local_standard_monomials

    F = J.poly
    try:
        std = local_standard_monomials([F] + [F.derivative(n) for n in XYZ])
    except NonIsolated:
        if J.exact:
            return -1
        raise JetTooShort("Tjurina algebra not finite at this jet order")
    tau = len(std)
    top = max((sum(e) for e in std), default=0)
    if not J.exact and top + 3 > J.order:
        raise JetTooShort(f"Tjurina staircase reaches degree {top}")
    _check_determinacy(J, tau)
    return tau


def _classify(J: Jet, table: NormalFormTable) -> SingClass:
    F = J.poly
    if F.is_zero():
        raise JetTooShort("jet vanishes") if not J.exact else NonIsolated("zero")
    if F.constant_term():
        return Smooth
    if F.order() < 2:
        return Smooth
    if F.order() > 2:
        return Unclassified(f"multiplicity {F.order()}")
    qa = quadratic_analysis(J)
    if qa.branch == "A":
        return split_hyperbolic(qa.jet)[1]
    if detect_E12(qa.jet):
        return SingClass("EDP_E12")
    tau = _tjurina_checked(qa.jet)
    if tau < 0:
        return Unclassified("non-isolated")
    dyn = dynkin_via_blowup(qa.jet, tau, table)
    if dyn.kind == "Unclassified":
        return dyn
    return coindex(dyn, tau, table)


def classify_jet(F: Poly | Jet, order: int | None = None) -> SingClass:
    """Class of the double point F = 0 at the origin of k^3."""
    J = F if isinstance(F, Jet) else Jet.of(F, order)
    return _classify(J, normal_form_table())


def classify_point(atlas, point, order: int | None = None, cap: int = 96) -> SingClass:
    """local_model, then classify; the jet order is doubled while too short."""
    from .geometry import DEFAULT_JET_ORDER, local_model

    N = order or DEFAULT_JET_ORDER
    while True:
        lm = local_model(atlas, point, N)
        try:
            return classify_jet(Jet.of(lm.jet, N, lm.exact))
        except JetTooShort as exc:
            if N >= cap:
                return Unclassified(f"jet order {cap} insufficient: {exc}")
            N = min(2 * N, cap)


# --- quotients and covers ------------------------------------------------

class CannotAppear(ValueError):
    pass


def image_type(c: SingClass) -> SingClass:
    """Type of the image point under a fixed-point-free p-closed quotient."""
    if c.kind == "Smooth" or c.kind == "EDP_E12":
        return Smooth
    if c.kind == "A":
        if c.n % 2 == 0:
            raise CannotAppear(f"{c} cannot appear on such a covering")
        m = (c.n + 1) // 2
        return Smooth if m == 1 else SingClass("A", m - 1)
    if c.kind == "D" and c.r == 0:
        return Smooth if c.n % 2 == 0 else SingClass("A", 1)
    if c.kind == "E" and c.r == 0:
        return SingClass("A", 2) if c.n == 6 else Smooth
    raise CannotAppear(f"{c} cannot appear on such a covering")


def lift_to_cover(c: SingClass) -> list[SingClass]:
    """Singularities over c after base change to the canonical covering."""
    if c.kind == "A":
        if c.n % 2 == 0:
            raise CannotAppear(f"{c} cannot appear on such a covering")
        return [SingClass("A", 1)] * ((c.n + 1) // 2)
    if c.kind == "D" and c.r == 0 and c.n % 2 == 1:
        return [SingClass("D", c.n - 1, 0)]
    if c == SingClass("E", 6, 0):
        return [Unclassified("lift over an A2 image is not determined")]
    image_type(c)  # raises for types that cannot appear
    return [] if c.kind == "Smooth" else [c]
