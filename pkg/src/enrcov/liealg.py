"""Two-dimensional restricted Lie algebras in characteristic 2.

A structure is stored as coordinates in a basis (D1, D2): the bracket
[D1, D2] = b1 D1 + b2 D2 and the squares D1^[2], D2^[2].  In characteristic 2
the square of a combination is

    (a D1 + b D2)^[2] = a^2 D1^[2] + b^2 D2^[2] + a b [D1, D2].
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import reduce
from math import lcm

from .gf2k import Field, embedder, extension, gf
from .poly import Poly, Ring
from .univariate import factor, roots

__all__ = [
    "Lie2Structure", "LieLine", "LineCensus", "LieAxiomError", "build_structure",
    "p_closed_cubic", "p_closed_lines", "classify_type", "CANONICAL", "square_coords",
]


class LieAxiomError(ValueError):
    """Structure data whose line census fits none of the five types."""


@dataclass(frozen=True)
class Lie2Structure:
    field: Field
    bracket: tuple[int, int]
    s1: tuple[int, int]
    s2: tuple[int, int]

    def is_abelian(self) -> bool:
        return not any(self.bracket)

    def to_field(self, fld: Field) -> "Lie2Structure":
        f = embedder(self.field, fld)
        return Lie2Structure(fld, *(tuple(map(f, v)) for v in (self.bracket, self.s1, self.s2)))


def square_coords(S: Lie2Structure, a: int, b: int) -> tuple[int, int]:
    W = S.field
    m = W.mul
    aa, bb, ab = m(a, a), m(b, b), m(a, b)
    return tuple(m(aa, S.s1[i]) ^ m(bb, S.s2[i]) ^ m(ab, S.bracket[i]) for i in range(2))


@dataclass(frozen=True)
class LieLine:
    point: tuple[int, int]  # normalised: (1, r) or (0, 1)
    kind: str  # "multiplicative" | "additive"
    field: Field

    def format(self) -> str:
        return f"[{self.field.format(self.point[0])}:{self.field.format(self.point[1])}]"


@dataclass(frozen=True)
class LineCensus:
    all_closed: bool
    lines: tuple[LieLine, ...]  # every p-closed line when finitely many
    additive: tuple[LieLine, ...] | str  # "all" when every line is additive

    def counts(self) -> tuple[int, int]:
        m = sum(1 for l in self.lines if l.kind == "multiplicative")
        return m, sum(1 for l in self.lines if l.kind == "additive")

    def signature(self) -> str:
        if self.all_closed:
            if self.additive == "all":
                return "all additive"
            return f"all/{len(self.additive)} additive"
        m, a = self.counts()
        parts = ([f"{m} mult"] if m else []) + ([f"{a} add"] if a else [])
        return " + ".join(parts) or "none"


def _coords(E, D1, D2, W: Field) -> tuple[int, int]:
    from .derivation import _value, express_in_basis

    a, b = express_in_basis(E, D1, D2)
    return _value(a, W), _value(b, W)


def build_structure(D1, D2, checks: int = 3, seed: int = 0) -> Lie2Structure:
    """Bracket and square coordinates of a derivation basis, with the
    polarisation identity checked on ``checks`` random combinations."""
    from .derivation import bracket, combine, square

    W = D1.field
    S = Lie2Structure(W, _coords(bracket(D1, D2), D1, D2, W),
                      _coords(square(D1), D1, D2, W), _coords(square(D2), D1, D2, W))
    K = extension(W, 2)
    E1, E2 = D1.to_field(K), D2.to_field(K)
    SK = S.to_field(K)
    rnd = random.Random(seed)
    for _ in range(checks):
        a, b = rnd.randrange(1, K.order), rnd.randrange(1, K.order)
        D = combine([(K.element(a), E1), (K.element(b), E2)])
        got = _coords(square(D), E1, E2, K)
        if got != square_coords(SK, a, b):
            raise LieAxiomError(f"polarisation identity fails at ({a}, {b}): {got}")
    return S


def p_closed_cubic(S: Lie2Structure) -> Poly:
    """det((e1 D1 + e2 D2)^[2] coordinates ; (e1, e2)) as a cubic in e1, e2."""
    R = Ring.make(["e1", "e2"], fld=S.field)
    e1, e2 = R.gens()
    q = [e1 * e1 * R.const(S.s1[i]) + e2 * e2 * R.const(S.s2[i]) + e1 * e2 * R.const(S.bracket[i])
         for i in range(2)]
    return q[0] * e2 + q[1] * e1


def p_closed_lines(S: Lie2Structure) -> LineCensus:
    cubic = p_closed_cubic(S)
    if cubic.is_zero():
        # additive locus: zeros of both square coordinates
        R = cubic.ring
        e1, e2 = R.gens()
        q = [e1 * e1 * R.const(S.s1[i]) + e2 * e2 * R.const(S.s2[i]) + e1 * e2 * R.const(S.bracket[i])
             for i in range(2)]
        nz = [f for f in q if not f.is_zero()]
        if not nz:
            return LineCensus(True, (), "all")
        K, pts = _line_zeros(nz[0])
        SK = S.to_field(K)
        add = tuple(LieLine(p, "additive", K) for p in pts if square_coords(SK, *p) == (0, 0))
        return LineCensus(True, (), add)
    K, pts = _line_zeros(cubic)
    SK = S.to_field(K)
    lines = []
    for p in pts:
        sq = square_coords(SK, *p)
        lines.append(LieLine(p, "additive" if sq == (0, 0) else "multiplicative", K))
    return LineCensus(False, tuple(lines), tuple(l for l in lines if l.kind == "additive"))


def _line_zeros(form: Poly) -> tuple[Field, list[tuple[int, int]]]:
    """Zeros of a nonzero binary form as normalised points (0, 1) or (1, r)."""
    W = form.ring.field
    deg = max(sum(e) for e in form.terms)
    # points (1, r): form(1, r) as a polynomial in r (e2 exponent)
    u = [0] * (deg + 1)
    for e, c in form.terms.items():
        u[e[1]] ^= c
    while u and not u[-1]:
        u.pop()
    facs = factor(W, u) if len(u) > 1 else []
    K = extension(W, reduce(lcm, (len(f) - 1 for f, _ in facs), 1))
    emb = embedder(W, K)
    pts = []
    for f, _ in facs:
        pts += [(1, r) for r in roots(K, [emb(c) for c in f])]
    if form.terms.get((0, deg), 0) == 0:  # e1 divides the form: [0:1] is a zero
        pts.insert(0, (0, 1))
    return K, sorted(set(pts))


def classify_type(S: Lie2Structure) -> int:
    census = p_closed_lines(S)
    if not S.is_abelian():
        if census.all_closed and census.additive != "all" and len(census.additive) == 1:
            return 1
        raise LieAxiomError(f"non-abelian data with census {census.signature()}")
    if not any(S.s1) and not any(S.s2):
        return 2
    if census.all_closed:
        raise LieAxiomError("abelian data with nonzero squares but every line p-closed")
    sig = census.counts()
    table = {(1, 1): 3, (0, 1): 4, (3, 0): 5}
    if sig not in table:
        raise LieAxiomError(f"line census {census.signature()} fits no type")
    return table[sig]


_F2 = gf(1)

# basis (x, y) of each type, written in coordinates of (x, y)
CANONICAL = {
    1: Lie2Structure(_F2, (0, 1), (1, 0), (0, 0)),
    2: Lie2Structure(_F2, (0, 0), (0, 0), (0, 0)),
    3: Lie2Structure(_F2, (0, 0), (1, 0), (0, 0)),
    4: Lie2Structure(_F2, (0, 0), (0, 1), (0, 0)),
    5: Lie2Structure(_F2, (0, 0), (1, 0), (0, 1)),
}
