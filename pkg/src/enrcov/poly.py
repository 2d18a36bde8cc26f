"""Sparse multivariate Laurent polynomials over GF(2^k).

A :class:`Ring` fixes the coefficient field, the ordered variable names and
the subset of inverted (unit) variables; only those may carry negative
exponents.  Polynomials are immutable maps ``exponent tuple -> coefficient``
with no zero coefficients stored.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Callable, Iterable, Mapping

from .gf2k import Field, FieldElement, embedder, field as make_field, poly2_str

__all__ = ["Ring", "Poly", "grevlex_key", "lex_key", "monomial_str"]

Exp = tuple[int, ...]


def grevlex_key(e: Exp) -> tuple[int, ...]:
    return (sum(e),) + tuple(-x for x in reversed(e))


def lex_key(e: Exp) -> Exp:
    return e


@dataclass(frozen=True)
class Ring:
    field: Field
    names: tuple[str, ...]
    inverted: frozenset[str] = frozenset()
    _index: dict = dc_field(default=None, compare=False, hash=False, repr=False)

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate variable names in {self.names}")
        bad = set(self.inverted) - set(self.names)
        if bad:
            raise ValueError(f"inverted variables not in ring: {sorted(bad)}")
        object.__setattr__(self, "inverted", frozenset(self.inverted))
        object.__setattr__(self, "_index", {n: i for i, n in enumerate(self.names)})

    @classmethod
    def make(cls, names: Iterable[str], inverted: Iterable[str] = (), fld: Field | None = None) -> "Ring":
        return cls(fld or make_field(), tuple(names), frozenset(inverted))

    @property
    def nvars(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown variable {name!r}") from None

    def is_inverted(self, i: int) -> bool:
        return self.names[i] in self.inverted

    def zero(self) -> "Poly":
        return Poly(self, {})

    def one(self) -> "Poly":
        return self.const(1)

    def const(self, c: int | FieldElement) -> "Poly":
        v = c.value if isinstance(c, FieldElement) else c
        return Poly(self, {(0,) * self.nvars: v} if v else {})

    def var(self, name: str) -> "Poly":
        e = [0] * self.nvars
        e[self.index(name)] = 1
        return Poly(self, {tuple(e): 1})

    def gens(self) -> list["Poly"]:
        return [self.var(n) for n in self.names]

    def monomial(self, exps: Mapping[str, int] | Exp, coeff: int = 1) -> "Poly":
        if isinstance(exps, Mapping):
            e = [0] * self.nvars
            for n, k in exps.items():
                e[self.index(n)] = k
            exps = tuple(e)
        return Poly(self, {tuple(exps): coeff} if coeff else {})

    def with_field(self, fld: Field) -> "Ring":
        return Ring(fld, self.names, self.inverted)

    def with_inverted(self, extra: Iterable[str]) -> "Ring":
        return Ring(self.field, self.names, self.inverted | frozenset(extra))

    def extend(self, names: Iterable[str], inverted: Iterable[str] = (), front: bool = False) -> "Ring":
        names = tuple(names)
        new = names + self.names if front else self.names + names
        return Ring(self.field, new, self.inverted | frozenset(inverted))

    def parse(self, text: str) -> "Poly":
        from .grammar import parse_poly

        return parse_poly(text, self)

    def __repr__(self) -> str:
        inv = f", inverted={sorted(self.inverted)}" if self.inverted else ""
        return f"Ring({self.field!r}, {list(self.names)}{inv})"


def monomial_str(names: tuple[str, ...], e: Exp) -> str:
    parts = []
    for n, k in zip(names, e):
        if k == 1:
            parts.append(n)
        elif k:
            parts.append(f"{n}^{k}")
    return "*".join(parts)


class Poly:
    """Immutable sparse polynomial; ``terms`` maps exponent tuples to ints.

    Plain ints mixed into arithmetic are raw field values (bit vectors in the
    power basis), not integers reduced mod 2.
    """

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: Ring, terms: dict[Exp, int]):
        self.ring = ring
        self.terms = terms
        self._hash = None

    # -- construction helpers
    def _new(self, terms: dict[Exp, int]) -> "Poly":
        return Poly(self.ring, terms)

    def _lift(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.ring != self.ring:
                raise ValueError(f"ring mismatch: {self.ring} vs {other.ring}")
            return other
        if isinstance(other, (int, FieldElement)):
            return self.ring.const(other)
        return NotImplemented

    # -- basic queries
    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self) -> int:
        return len(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, FieldElement)):
            other = self.ring.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ring.names, frozenset(self.terms.items())))
        return self._hash

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_term(self) -> int:
        return self.terms.get((0,) * self.ring.nvars, 0)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def order(self) -> int:
        """Lowest total degree of a term (-1 for zero)."""
        return min((sum(e) for e in self.terms), default=-1)

    def degree(self, name: str) -> int:
        i = self.ring.index(name)
        return max((e[i] for e in self.terms), default=-1)

    def min_exponents(self) -> Exp:
        n = self.ring.nvars
        if not self.terms:
            return (0,) * n
        return tuple(min(e[i] for e in self.terms) for i in range(n))

    def is_laurent(self) -> bool:
        return any(x < 0 for e in self.terms for x in e)

    def variables(self) -> set[str]:
        used = set()
        for e in self.terms:
            for i, k in enumerate(e):
                if k:
                    used.add(self.ring.names[i])
        return used

    def coefficient(self, exps: Exp) -> FieldElement:
        return FieldElement(self.ring.field, self.terms.get(tuple(exps), 0))

    def sorted_terms(self, key: Callable[[Exp], tuple] = grevlex_key) -> list[tuple[Exp, int]]:
        return sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)

    def leading(self, key: Callable[[Exp], tuple] = grevlex_key) -> tuple[Exp, int]:
        e = max(self.terms, key=key)
        return e, self.terms[e]

    # -- arithmetic
    def __add__(self, other) -> "Poly":
        other = self._lift(other)
        if other is NotImplemented:
            return other
        if len(other.terms) > len(self.terms):
            a, b = other.terms, self.terms
        else:
            a, b = self.terms, other.terms
        r = dict(a)
        for e, c in b.items():
            v = r.get(e, 0) ^ c
            if v:
                r[e] = v
            else:
                r.pop(e, None)
        return self._new(r)

    __radd__ = __add__
    __sub__ = __add__
    __rsub__ = __add__

    def __neg__(self) -> "Poly":
        return self

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, FieldElement)):
            return self.scale(other.value if isinstance(other, FieldElement) else other)
        other = self._lift(other)
        if other is NotImplemented:
            return other
        a, b = self.terms, other.terms
        if not a or not b:
            return self._new({})
        if len(a) < len(b):
            a, b = b, a
        r: dict[Exp, int] = {}
        get = r.get
        if self.ring.field.degree == 1:
            for e1 in b:
                for e2 in a:
                    e = tuple(x + y for x, y in zip(e1, e2))
                    if get(e):
                        del r[e]
                    else:
                        r[e] = 1
            return self._new(r)
        mul = self.ring.field.mul
        for e1, c1 in b.items():
            for e2, c2 in a.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                v = get(e, 0) ^ mul(c1, c2)
                if v:
                    r[e] = v
                else:
                    r.pop(e, None)
        return self._new(r)

    __rmul__ = __mul__

    def scale(self, c: int) -> "Poly":
        if c == 0:
            return self._new({})
        if c == 1:
            return self
        mul = self.ring.field.mul
        return self._new({e: mul(v, c) for e, v in self.terms.items()})

    def mul_monomial(self, m: Exp, c: int = 1) -> "Poly":
        mul = self.ring.field.mul
        return self._new({tuple(x + y for x, y in zip(e, m)): (v if c == 1 else mul(v, c))
                          for e, v in self.terms.items()})

    def inverse_monomial(self) -> "Poly":
        """Inverse of a unit monomial c * (inverted variables)^e."""
        if len(self.terms) != 1:
            raise ValueError(f"not a monomial unit: {self}")
        (e, c), = self.terms.items()
        for i, k in enumerate(e):
            if k and not self.ring.is_inverted(i):
                raise ValueError(f"not a unit: {self} ({self.ring.names[i]} not inverted)")
        return self._new({tuple(-x for x in e): self.ring.field.inv(c)})

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            return self.inverse_monomial() ** (-n)
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def square(self) -> "Poly":
        # Frobenius is additive in characteristic 2
        mul = self.ring.field.mul
        return self._new({tuple(2 * x for x in e): mul(c, c) for e, c in self.terms.items()})

    def __truediv__(self, other) -> "Poly":
        other = self._lift(other)
        return self * other.inverse_monomial()

    # -- calculus and maps
    def derivative(self, name: str) -> "Poly":
        i = self.ring.index(name)
        r = {}
        for e, c in self.terms.items():
            k = e[i]
            if k & 1:  # k * t^(k-1), k reduced mod 2
                ne = e[:i] + (k - 1,) + e[i + 1:]
                r[ne] = c
        return self._new(r)

    def evaluate(self, point: Mapping[str, int | FieldElement] | tuple) -> FieldElement:
        """Exact value at a point; coordinates are ints or FieldElements of the ring's field."""
        fld = self.ring.field
        if isinstance(point, Mapping):
            try:
                vals = [point[n] for n in self.ring.names]
            except KeyError as exc:
                raise KeyError(f"variable {exc.args[0]!r} not assigned") from None
        else:
            vals = list(point)
        vals = [v.value if isinstance(v, FieldElement) else v for v in vals]
        for i, v in enumerate(vals):
            if v == 0 and self.ring.is_inverted(i):
                raise ZeroDivisionError(f"inverted variable {self.ring.names[i]} assigned 0")
        acc = 0
        for e, c in self.terms.items():
            t = c
            for v, k in zip(vals, e):
                if k:
                    t = fld.mul(t, fld.pow(v, k))
                    if t == 0:
                        break
            acc ^= t
        return FieldElement(fld, acc)

    def substitute(self, mapping: Mapping[str, "Poly"], target: Ring | None = None) -> "Poly":
        """Replace variables by polynomials of ``target`` (unmapped names carry over)."""
        if target is None:
            target = next(iter(mapping.values())).ring if mapping else self.ring
        images = []
        for n in self.ring.names:
            if n in mapping:
                img = mapping[n]
                if img.ring != target:
                    img = img.to_ring(target)
                images.append(img)
            else:
                images.append(target.var(n))
        cache: dict[tuple[int, int], Poly] = {}

        def power(i: int, k: int) -> Poly:
            key = (i, k)
            if key not in cache:
                cache[key] = images[i] ** k
            return cache[key]

        acc: dict[Exp, int] = {}
        fld = target.field
        for e, c in self.terms.items():
            t = target.const(c) if fld is self.ring.field else None
            if t is None:
                raise ValueError("field mismatch in substitute")
            for i, k in enumerate(e):
                if k:
                    t = t * power(i, k)
            for te, tc in t.terms.items():
                v = acc.get(te, 0) ^ tc
                if v:
                    acc[te] = v
                else:
                    acc.pop(te, None)
        return Poly(target, acc)

    def clear_denominators(self) -> tuple["Poly", Exp]:
        """Shift inverted-variable exponents so each has minimum 0.

        Returns the cleared polynomial and the monomial exponent it was
        multiplied by (entries may be negative; only inverted positions move).
        """
        if not self.terms:
            return self, (0,) * self.ring.nvars
        mins = self.min_exponents()
        shift = []
        for i, m in enumerate(mins):
            if m < 0:
                if not self.ring.is_inverted(i):
                    raise ValueError(f"negative exponent on non-inverted {self.ring.names[i]}")
                shift.append(-m)
            elif m > 0 and self.ring.is_inverted(i):
                shift.append(-m)
            else:
                shift.append(0)
        shift = tuple(shift)
        if not any(shift):
            return self, shift
        return self.mul_monomial(shift), shift

    def cleared(self) -> "Poly":
        return self.clear_denominators()[0]

    def truncate(self, order: int, weights: tuple[int, ...] | None = None) -> "Poly":
        """Keep terms of (weighted) degree <= order."""
        w = weights or (1,) * self.ring.nvars
        return self._new({e: c for e, c in self.terms.items()
                          if sum(a * b for a, b in zip(w, e)) <= order})

    def to_ring(self, ring: Ring) -> "Poly":
        """Re-express in another ring sharing the field; variables matched by name."""
        if ring == self.ring:
            return self
        if ring.field is not self.ring.field:
            raise ValueError("to_ring cannot change the field; use map_field")
        idx = [ring.index(n) for n in self.ring.names]
        n = ring.nvars
        r = {}
        for e, c in self.terms.items():
            ne = [0] * n
            for j, k in zip(idx, e):
                ne[j] = k
            r[tuple(ne)] = c
        return Poly(ring, r)

    def drop_vars(self, ring: Ring) -> "Poly":
        """Project onto a ring whose names are a subset; absent variables must not occur."""
        idx = [self.ring.index(n) for n in ring.names]
        keep = set(idx)
        r = {}
        for e, c in self.terms.items():
            if any(k for i, k in enumerate(e) if i not in keep):
                raise ValueError(f"{self} involves variables outside {ring.names}")
            r[tuple(e[i] for i in idx)] = c
        return Poly(ring, r)

    def map_field(self, fld: Field) -> "Poly":
        if fld is self.ring.field:
            return self
        f = embedder(self.ring.field, fld)
        return Poly(self.ring.with_field(fld), {e: f(c) for e, c in self.terms.items()})

    def translate(self, point: Mapping[str, int]) -> "Poly":
        """Substitute v -> v + point[v] (moves the point to the origin)."""
        R = self.ring
        mapping = {n: R.var(n) + R.const(v) if v else R.var(n) for n, v in point.items()}
        return self.substitute(mapping, R)

    # -- display
    def __str__(self) -> str:
        if not self.terms:
            return "0"
        names = self.ring.names
        fld = self.ring.field
        parts = []
        for e, c in self.sorted_terms():
            m = monomial_str(names, e)
            if fld.degree == 1 or c == 1:
                parts.append(m or "1")
            else:
                cs = poly2_str(c)
                cs = f"({cs})" if "+" in cs else cs
                parts.append(f"{cs}*{m}" if m else cs)
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"Poly({self})"
