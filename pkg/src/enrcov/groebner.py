"""Buchberger Groebner bases over GF(2^k), with the usual ideal toolkit.

Normal selection strategy (smallest lcm degree, then insertion order) with the
Gebauer-Moeller pair criteria.  Bases are reduced, monic and sorted, so
results are reproducible.  Set ``ENRCOV_DEBUG=1`` to re-check the Buchberger
criterion on every emitted basis and log traces.
"""

from __future__ import annotations

import heapq
import logging
import os
from dataclasses import dataclass
from itertools import product as iproduct
from math import lcm as ilcm
from typing import Iterable, Sequence

from .gf2k import Field, extension
from .poly import Exp, Poly, Ring
from .univariate import factor, trim, ugcd

__all__ = [
    "MonomialOrder", "GREVLEX", "LEX", "GroebnerBasis", "groebner", "normal_form",
    "contains_one", "saturate", "eliminate", "zero_dim_degree", "NotZeroDimensional",
    "ExtensionTooSmall", "solve_zero_dim", "krull_dimension", "check_buchberger",
    "ideal_member", "standard_monomials",
]

log = logging.getLogger(__name__)
DEBUG = bool(os.environ.get("ENRCOV_DEBUG"))


class NotZeroDimensional(ValueError):
    pass


class ExtensionTooSmall(ValueError):
    def __init__(self, degree: int, bound: int):
        super().__init__(f"solutions require larger extension (degree {degree} > {bound})")
        self.degree = degree
        self.bound = bound


@dataclass(frozen=True)
class MonomialOrder:
    kind: str = "grevlex"  # grevlex | lex | block
    split: int = 0  # block: first `split` variables form the eliminated block

    def key(self, e: Exp) -> tuple:
        if self.kind == "grevlex":
            return (sum(e),) + tuple(-x for x in reversed(e))
        if self.kind == "lex":
            return e
        if self.kind == "block":
            a, b = e[: self.split], e[self.split:]
            return ((sum(a),) + tuple(-x for x in reversed(a))
                    + (sum(b),) + tuple(-x for x in reversed(b)))
        raise ValueError(f"unknown order {self.kind}")


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")


# --- low-level dict polynomial helpers ----------------------------------

def _divides(a: Exp, b: Exp) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a: Exp, b: Exp) -> Exp:
    return tuple(max(x, y) for x, y in zip(a, b))


def _sub(a: Exp, b: Exp) -> Exp:
    return tuple(x - y for x, y in zip(a, b))


def _add(a: Exp, b: Exp) -> Exp:
    return tuple(x + y for x, y in zip(a, b))


class _Elem:
    __slots__ = ("lm", "terms")

    def __init__(self, lm: Exp, terms: dict):
        self.lm = lm
        self.terms = terms


def _monic(F: Field, terms: dict, key) -> _Elem:
    lm = max(terms, key=key)
    c = terms[lm]
    if c != 1:
        inv = F.inv(c)
        terms = {e: F.mul(v, inv) for e, v in terms.items()}
    return _Elem(lm, terms)


def _reduce(F: Field, p: dict, basis: Sequence[_Elem], key, full: bool = True,
            trunc: int | None = None) -> dict:
    """Remainder of p modulo basis (monic elements).

    With ``trunc`` set, monomials of total degree >= trunc are treated as zero.
    """
    p = dict(p)
    heap = [tuple(-x for x in key(e)) + (e,) for e in p]
    heapq.heapify(heap)
    r = {}
    mul = F.mul
    while heap:
        item = heapq.heappop(heap)
        e = item[-1]
        c = p.pop(e, None)
        if c is None:
            continue
        for g in basis:
            if _divides(g.lm, e):
                q = _sub(e, g.lm)
                for ge, gc in g.terms.items():
                    if ge == g.lm:
                        continue
                    ne = _add(ge, q)
                    if trunc is not None and sum(ne) >= trunc:
                        continue
                    v = mul(c, gc)
                    old = p.get(ne)
                    if old is None:
                        p[ne] = v
                        heapq.heappush(heap, tuple(-x for x in key(ne)) + (ne,))
                    else:
                        v ^= old
                        if v:
                            p[ne] = v
                        else:
                            del p[ne]
                break
        else:
            r[e] = c
            if not full:
                r.update(p)
                return r
    return r


def _spoly(F: Field, f: _Elem, g: _Elem, trunc: int | None = None) -> dict:
    L = _lcm(f.lm, g.lm)
    qf, qg = _sub(L, f.lm), _sub(L, g.lm)
    r = {}
    for terms, q in ((f.terms, qf), (g.terms, qg)):
        for e, c in terms.items():
            ne = _add(e, q)
            if ne == L or (trunc is not None and sum(ne) >= trunc):
                continue
            v = r.get(ne, 0) ^ c
            if v:
                r[ne] = v
            else:
                r.pop(ne, None)
    return r


def buchberger(F: Field, polys: Iterable[dict], key, trunc: int | None = None) -> list[_Elem]:
    """Reduced Groebner basis of dict polynomials (monic, sorted by key).

    ``trunc`` computes a basis of I + m^trunc (all monomials of degree >= trunc
    are zero); any multiplicative total order is then admissible, local
    degree orders included.
    """
    G: list[_Elem] = []
    pairs: list[tuple[int, int, int, Exp]] = []  # (deg lcm, j, i, lcm)
    counter = 0

    def add_elem(h: _Elem) -> None:
        nonlocal pairs
        k = len(G)
        new_pairs = []
        for i, g in enumerate(G):
            if g is None:
                continue
            L = _lcm(g.lm, h.lm)
            if trunc is not None and sum(L) >= trunc:
                continue
            new_pairs.append((i, L))
        # chain criterion on old pairs
        kept = []
        for (d, j, i, L) in pairs:
            if _divides(h.lm, L) and _lcm(G[i].lm, h.lm) != L and _lcm(G[j].lm, h.lm) != L:
                continue
            kept.append((d, j, i, L))
        pairs = kept
        # among new pairs: drop those whose lcm is a proper multiple of another's,
        # then coprime ones (product criterion)
        lcms = [L for _, L in new_pairs]
        filtered = []
        for idx, (i, L) in enumerate(new_pairs):
            dominated = any(
                _divides(L2, L) and (L2 != L or idx2 < idx)
                for idx2, L2 in enumerate(lcms) if idx2 != idx
            )
            if dominated:
                continue
            filtered.append((i, L))
        for i, L in filtered:
            if trunc is None and all(a == 0 or b == 0 for a, b in zip(G[i].lm, h.lm)):
                continue
            pairs.append((sum(L), k, i, L))
        G.append(h)

    init = []
    for p in polys:
        if p:
            init.append(_monic(F, p, key))
    init.sort(key=lambda g: key(g.lm))
    for g in init:
        r = _reduce(F, g.terms, [x for x in G if x is not None], key, trunc=trunc)
        if r:
            h = _monic(F, r, key)
            if not any(h.lm):
                return [_Elem(h.lm, {h.lm: 1})]
            add_elem(h)
    while pairs:
        pairs.sort(key=lambda t: (t[0], t[1], t[2]))
        d, j, i, L = pairs.pop(0)
        counter += 1
        s = _spoly(F, G[i], G[j], trunc)
        if not s:
            continue
        r = _reduce(F, s, G, key, trunc=trunc)
        if r:
            h = _monic(F, r, key)
            if not any(h.lm):
                return [_Elem(h.lm, {h.lm: 1})]
            add_elem(h)
    # minimalize and interreduce
    G = sorted(G, key=lambda g: key(g.lm))
    minimal = []
    for g in G:
        if not any(_divides(m.lm, g.lm) for m in minimal):
            minimal = [m for m in minimal if not _divides(g.lm, m.lm)]
            minimal.append(g)
    out = []
    for idx, g in enumerate(minimal):
        others = minimal[:idx] + minimal[idx + 1:]
        tail = dict(g.terms)
        c = tail.pop(g.lm)
        r = _reduce(F, tail, others, key, trunc=trunc)
        r[g.lm] = c
        out.append(_monic(F, r, key))
    out.sort(key=lambda g: key(g.lm))
    if log.isEnabledFor(logging.DEBUG):
        log.debug("groebner: %d S-pairs, %d elements", counter, len(out))
    return out


# --- public API ----------------------------------------------------------

def _as_polynomial(p: Poly) -> Poly:
    if p.is_laurent():
        mins = p.min_exponents()
        return p.mul_monomial(tuple(-m if m < 0 else 0 for m in mins))
    return p


class GroebnerBasis:
    """Reduced Groebner basis together with its order and source generators."""

    def __init__(self, ring: Ring, polys: list[Poly], order: MonomialOrder, source: list[Poly]):
        self.ring = ring
        self.polys = polys
        self.order = order
        self.source = source
        self._elems = [_Elem(p.leading(order.key)[0], p.terms) for p in polys]

    def __iter__(self):
        return iter(self.polys)

    def __len__(self) -> int:
        return len(self.polys)

    def __repr__(self) -> str:
        return f"GroebnerBasis([{', '.join(map(str, self.polys))}], {self.order.kind})"

    @property
    def leading_monomials(self) -> list[Exp]:
        return [g.lm for g in self._elems]

    def is_unit(self) -> bool:
        return len(self.polys) == 1 and self.polys[0].is_constant() and bool(self.polys[0])

    def reduce(self, f: Poly) -> Poly:
        if f.ring != self.ring:
            f = f.to_ring(self.ring)
        f = _as_polynomial(f)
        return Poly(self.ring, _reduce(self.ring.field, f.terms, self._elems, self.order.key))

    def contains(self, f: Poly) -> bool:
        return self.reduce(f).is_zero()


def groebner(gens: Sequence[Poly], order: MonomialOrder = GREVLEX, ring: Ring | None = None) -> GroebnerBasis:
    """Reduced Groebner basis of the ideal generated by ``gens``."""
    gens = list(gens)
    if ring is None:
        if not gens:
            raise ValueError("ring required for an empty generator list")
        ring = gens[0].ring
    polys = [_as_polynomial(g.to_ring(ring) if g.ring != ring else g) for g in gens]
    elems = buchberger(ring.field, [p.terms for p in polys if p], order.key)
    gb = GroebnerBasis(ring, [Poly(ring, g.terms) for g in elems], order, gens)
    if DEBUG:
        assert check_buchberger(gb), "Buchberger criterion violated"
        log.debug("basis: %s", gb)
    return gb


def check_buchberger(gb: GroebnerBasis) -> bool:
    """Every S-polynomial of basis pairs reduces to zero."""
    F = gb.ring.field
    E = gb._elems
    for i in range(len(E)):
        for j in range(i + 1, len(E)):
            s = _spoly(F, E[i], E[j])
            if s and _reduce(F, s, E, gb.order.key):
                return False
    return True


def normal_form(f: Poly, gb: GroebnerBasis) -> Poly:
    return gb.reduce(f)


def ideal_member(f: Poly, gb: GroebnerBasis) -> bool:
    return gb.contains(f)


def contains_one(gens_or_gb) -> bool:
    gb = gens_or_gb if isinstance(gens_or_gb, GroebnerBasis) else groebner(gens_or_gb)
    return gb.is_unit()


def _reorder(ring: Ring, first: Sequence[str]) -> Ring:
    rest = [n for n in ring.names if n not in first]
    return Ring(ring.field, tuple(first) + tuple(rest), ring.inverted)


def eliminate(gens: Sequence[Poly], names: Iterable[str], ring: Ring | None = None) -> list[Poly]:
    """Generators of the elimination ideal I cap k[remaining variables].

    The result lives in the ring with ``names`` removed.
    """
    names = list(names)
    ring = ring or gens[0].ring
    if not names:
        return list(groebner(gens, ring=ring).polys)
    big = _reorder(ring, names)
    gb = groebner([g.to_ring(big) for g in gens], MonomialOrder("block", len(names)), ring=big)
    small = Ring(ring.field, tuple(n for n in ring.names if n not in names),
                 ring.inverted - frozenset(names))
    k = len(names)
    return [p.drop_vars(small) for p in gb.polys if all(not any(e[:k]) for e in p.terms)]


_AUX = "_sat"


def saturate(gens: Sequence[Poly], f: Poly) -> list[Poly]:
    """Generators (a reduced grevlex basis) of I : f^infinity."""
    ring = gens[0].ring if gens else f.ring
    f = _as_polynomial(f)
    if f.is_constant():
        if f.is_zero():
            raise ValueError("cannot saturate at 0")
        return list(groebner(gens, ring=ring).polys)
    big = ring.extend([_AUX], front=True)
    u = big.var(_AUX)
    aux = [g.to_ring(big) for g in gens] + [u * f.to_ring(big) + big.one()]
    elim = eliminate(aux, [_AUX], ring=big)
    elim = [p.to_ring(ring) for p in elim]
    return list(groebner(elim, ring=ring).polys) if elim else []


def saturate_inverted(gens: Sequence[Poly], ring: Ring, names: Iterable[str] | None = None) -> GroebnerBasis:
    """Basis of the ideal localized at the inverted variables, pulled back."""
    names = sorted(ring.inverted if names is None else names, key=ring.index)
    polys = [_as_polynomial(g.to_ring(ring) if g.ring != ring else g) for g in gens]
    if names:
        prod = ring.one()
        for n in names:
            prod = prod * ring.var(n)
        polys = saturate(polys, prod)
    return groebner(polys, ring=ring)


def krull_dimension(gb: GroebnerBasis) -> int:
    """Dimension from leading-term combinatorics: the largest set of variables
    containing no leading monomial's support."""
    n = gb.ring.nvars
    if gb.is_unit():
        return -1
    supports = [frozenset(i for i, k in enumerate(lm) if k) for lm in gb.leading_monomials]
    best = 0
    for mask in range(1 << n):
        size = bin(mask).count("1")
        if size <= best:
            continue
        S = {i for i in range(n) if mask >> i & 1}
        if not any(s <= S for s in supports):
            best = size
    return best


def standard_monomials(gb: GroebnerBasis) -> list[Exp]:
    """Monomials outside the leading-term ideal of a zero-dimensional basis."""
    n = gb.ring.nvars
    if gb.is_unit():
        return []
    lms = gb.leading_monomials
    bounds = []
    for i in range(n):
        pure = [lm[i] for lm in lms if lm[i] and all(k == 0 for j, k in enumerate(lm) if j != i)]
        if not pure:
            raise NotZeroDimensional(f"variable {gb.ring.names[i]} has no pure-power leading term")
        bounds.append(min(pure))
    out = []
    for e in iproduct(*(range(b) for b in bounds)):
        if not any(_divides(lm, e) for lm in lms):
            out.append(tuple(e))
    return out


def zero_dim_degree(gens_or_gb) -> int:
    """Number of standard monomials (vector-space dimension of k[x]/I)."""
    gb = gens_or_gb if isinstance(gens_or_gb, GroebnerBasis) else groebner(gens_or_gb)
    return len(standard_monomials(gb))


# --- zero-dimensional solving -------------------------------------------

@dataclass(frozen=True)
class Solutions:
    field: Field
    names: tuple[str, ...]
    points: tuple[tuple[int, ...], ...]

    def as_dicts(self) -> list[dict[str, int]]:
        return [dict(zip(self.names, p)) for p in self.points]

    def __len__(self) -> int:
        return len(self.points)


def _lex_basis(gens: Sequence[Poly], ring: Ring) -> GroebnerBasis:
    return groebner(gens, LEX, ring=ring)


def _backsolve(gb: GroebnerBasis, W: Field, seed: int) -> tuple[list[tuple[int, ...]], int]:
    """Solutions over W, plus the lcm of degrees of non-linear factors met."""
    ring = gb.ring
    n = ring.nvars
    polys = [p.map_field(W) for p in gb.polys]
    levels: list[list[Poly]] = [[] for _ in range(n)]
    for p in polys:
        used = [i for i in range(n) if any(e[i] for e in p.terms)]
        if used:
            levels[min(used)].append(p)
    need = 1
    partial: list[tuple[int, ...]] = [()]
    for i in range(n - 1, -1, -1):
        nxt = []
        for tail in partial:
            g: list[int] = []
            for p in levels[i]:
                uni: dict[int, int] = {}
                for e, c in p.terms.items():
                    v = c
                    for j in range(i + 1, n):
                        if e[j]:
                            v = W.mul(v, W.pow(tail[j - i - 1], e[j]))
                    if v:
                        uni[e[i]] = uni.get(e[i], 0) ^ v
                deg = max(uni, default=-1)
                u = trim([uni.get(k, 0) for k in range(deg + 1)])
                if u:
                    g = u if not g else ugcd(W, g, u)
            if not g:
                raise NotZeroDimensional(f"no univariate constraint on {ring.names[i]}")
            if len(g) == 1:
                continue
            for fac, _ in factor(W, g, seed):
                if len(fac) == 2:
                    nxt.append((fac[0],) + tail)
                else:
                    need = ilcm(need, len(fac) - 1)
        partial = nxt
    return sorted(set(partial)), need


def solve_zero_dim(gens: Sequence[Poly], max_ext_degree: int = 4, field: Field | None = None,
                   seed: int = 0) -> Solutions:
    """All solutions of a zero-dimensional system over an extension of degree
    <= max_ext_degree of the coefficient field (the smallest that suffices,
    unless ``field`` is given)."""
    ring = gens[0].ring
    gb = gens if isinstance(gens, GroebnerBasis) and gens.order == LEX else _lex_basis(list(gens), ring)
    ring = gb.ring
    K = ring.field
    if gb.is_unit():
        return Solutions(field or K, ring.names, ())
    for i in range(ring.nvars):
        if not any(lm[i] and all(k == 0 for j, k in enumerate(lm) if j != i) for lm in gb.leading_monomials):
            raise NotZeroDimensional(f"ideal is not zero-dimensional in {ring.names[i]}")
    if field is not None:
        pts, need = _backsolve(gb, field, seed)
        if need > 1:
            raise ExtensionTooSmall(field.degree * need // K.degree, field.degree // K.degree)
        return Solutions(field, ring.names, tuple(pts))
    d = 1
    while True:
        if d > max_ext_degree:
            raise ExtensionTooSmall(d, max_ext_degree)
        W = extension(K, d)
        pts, need = _backsolve(gb, W, seed)
        if need == 1:
            return Solutions(W, ring.names, tuple(pts))
        d *= need
