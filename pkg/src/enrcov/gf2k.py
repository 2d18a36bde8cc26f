"""Finite fields GF(2^k).

Elements are plain ints whose bits are coordinates in the power basis of the
generator ``w``.  A :class:`Field` carries log/antilog tables, so field
arithmetic is table lookups.  Fields are interned by modulus.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

__all__ = [
    "Field",
    "FieldElement",
    "ReducibleModulus",
    "field",
    "gf",
    "embed",
    "clmul",
    "poly2_mod",
    "poly2_str",
    "is_irreducible2",
    "default_modulus",
]

MAX_DEGREE = 20


class ReducibleModulus(ValueError):
    pass


# --- GF(2)[w] polynomials packed into ints -------------------------------

def clmul(a: int, b: int) -> int:
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        b >>= 1
    return r


def poly2_mod(a: int, m: int) -> int:
    dm = m.bit_length()
    while a.bit_length() >= dm:
        a ^= m << (a.bit_length() - dm)
    return a


def poly2_divmod(a: int, m: int) -> tuple[int, int]:
    q = 0
    dm = m.bit_length()
    while a.bit_length() >= dm:
        s = a.bit_length() - dm
        q ^= 1 << s
        a ^= m << s
    return q, a


def poly2_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, poly2_mod(a, b)
    return a


def poly2_str(m: int, var: str = "w") -> str:
    if m == 0:
        return "0"
    parts = []
    for e in range(m.bit_length() - 1, -1, -1):
        if (m >> e) & 1:
            parts.append("1" if e == 0 else var if e == 1 else f"{var}^{e}")
    return "+".join(parts)


def _poly2_factor(m: int) -> list[int]:
    """Trial-division factorization; only used for error messages."""
    out = []
    d = 2
    while m.bit_length() > 1 and d.bit_length() <= (m.bit_length() + 1) // 2 + 1:
        q, r = poly2_divmod(m, d)
        if r == 0 and d.bit_length() > 1:
            out.append(d)
            m = q
        else:
            d += 1
    if m.bit_length() > 1:
        out.append(m)
    return out


def is_irreducible2(m: int) -> bool:
    """Rabin-style test: gcd(w^(2^i) - w, m) = 1 for i <= deg/2."""
    k = m.bit_length() - 1
    if k < 1:
        return False
    if k == 1:
        return True
    x = 2
    p = x
    for _ in range(k // 2):
        p = poly2_mod(clmul(p, p), m)
        if poly2_gcd(p ^ x, m) != 1:
            return False
    return True


@lru_cache(maxsize=None)
def default_modulus(k: int) -> int:
    """Smallest irreducible polynomial of degree k (as an int)."""
    if k == 1:
        return 0b10
    for m in range((1 << k) | 1, 1 << (k + 1), 2):
        if is_irreducible2(m):
            return m
    raise AssertionError("unreachable")


# --- fields --------------------------------------------------------------

class Field:
    """GF(2^k) defined by an irreducible modulus over GF(2)."""

    def __init__(self, modulus: int):
        if modulus < 2:
            raise ValueError("modulus must have degree >= 1")
        if not is_irreducible2(modulus):
            fs = _poly2_factor(modulus)
            desc = "*".join(f"({poly2_str(f)})" for f in fs)
            raise ReducibleModulus(f"reducible: {desc}")
        self.modulus = modulus
        self.degree = modulus.bit_length() - 1
        if self.degree > MAX_DEGREE:
            raise ValueError(f"extension degree {self.degree} too large")
        self.order = 1 << self.degree
        self._build_tables()

    def _build_tables(self) -> None:
        q = self.order
        if q == 2:
            self._exp = [1, 1]
            self._log = [0, 0]
            return
        for g in range(2, q):
            exp = [0] * (2 * q)
            log = [0] * q
            x = 1
            ok = True
            for i in range(q - 1):
                if i and x == 1:
                    ok = False
                    break
                exp[i] = x
                log[x] = i
                x = poly2_mod(clmul(x, g), self.modulus)
            if ok and x == 1:
                for i in range(q - 1, 2 * q):
                    exp[i] = exp[i - (q - 1)]
                self._exp, self._log = exp, log
                return
        raise AssertionError("no primitive element")

    def __repr__(self) -> str:
        return f"GF(2^{self.degree})[{poly2_str(self.modulus)}]"

    @property
    def name(self) -> str:
        return "gf2" if self.degree == 1 else poly2_str(self.modulus)

    # raw int arithmetic
    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in " + repr(self))
        return self._exp[(self.order - 1 - self._log[a]) % (self.order - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e == 0:
            return 1
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("0 to a negative power")
            return 0
        return self._exp[(self._log[a] * e) % (self.order - 1)]

    def sqrt(self, a: int) -> int:
        # Frobenius is bijective; sqrt(a) = a^(2^(k-1))
        for _ in range(self.degree - 1):
            a = self.mul(a, a)
        return a

    def elements(self) -> range:
        return range(self.order)

    def element(self, v: int) -> "FieldElement":
        return FieldElement(self, v)

    @property
    def gen(self) -> "FieldElement":
        return FieldElement(self, 2 % self.order if self.degree > 1 else 1)

    def format(self, a: int) -> str:
        return poly2_str(a)


@lru_cache(maxsize=None)
def field(modulus: int | None = None) -> Field:
    """Interned field for the given modulus (default GF(2))."""
    return Field(0b10 if modulus is None else modulus)


def gf(k: int) -> Field:
    """The standard field of degree k (smallest irreducible modulus)."""
    return field(default_modulus(k))


@lru_cache(maxsize=None)
def _embedding_basis(small: Field, big: Field) -> tuple[int, ...]:
    if big.degree % small.degree:
        raise ValueError(f"{small!r} does not embed in {big!r}")
    if small.degree == 1:
        return (1,)
    # image of the generator: the smallest root of the small modulus in big
    m = small.modulus
    root = None
    for r in range(2, big.order):
        acc = 0
        p = 1
        for e in range(small.degree + 1):
            if (m >> e) & 1:
                acc ^= p
            p = big.mul(p, r)
        if acc == 0:
            root = r
            break
    assert root is not None
    return tuple(big.pow(root, i) for i in range(small.degree))


def embed(small: Field, big: Field, a: int) -> int:
    if small is big:
        return a
    basis = _embedding_basis(small, big)
    r = 0
    i = 0
    while a:
        if a & 1:
            r ^= basis[i]
        a >>= 1
        i += 1
    return r


def embedder(small: Field, big: Field):
    if small is big:
        return lambda a: a
    basis = _embedding_basis(small, big)

    def f(a: int) -> int:
        r = 0
        i = 0
        while a:
            if a & 1:
                r ^= basis[i]
            a >>= 1
            i += 1
        return r

    return f


def extension(base: Field, d: int) -> Field:
    """The standard field of degree base.degree * d."""
    if d == 1:
        return base
    return gf(base.degree * d)


@dataclass(frozen=True)
class FieldElement:
    field: Field
    value: int

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field is not self.field:
                raise ValueError("field mismatch")
            return other.value
        if isinstance(other, int):
            return other & 1
        return NotImplemented

    def __add__(self, other):
        return FieldElement(self.field, self.value ^ self._coerce(other))

    __radd__ = __add__
    __sub__ = __add__
    __rsub__ = __add__

    def __neg__(self):
        return self

    def __mul__(self, other):
        return FieldElement(self.field, self.field.mul(self.value, self._coerce(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldElement(self.field, self.field.div(self.value, self._coerce(other)))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow(self.value, e))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv(self.value))

    def sqrt(self) -> "FieldElement":
        return FieldElement(self.field, self.field.sqrt(self.value))

    def __bool__(self) -> bool:
        return self.value != 0

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            return self.field is other.field and self.value == other.value
        if isinstance(other, int):
            return self.value == (other & 1)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.field.modulus, self.value))

    def __repr__(self) -> str:
        return poly2_str(self.value)

    __str__ = __repr__
