"""Dense univariate polynomials over GF(2^k) and their factorization.

Polynomials are coefficient lists, lowest degree first, trimmed so the last
entry is nonzero (the zero polynomial is ``[]``).  Factorization runs
square-free decomposition, distinct-degree and then equal-degree splitting
(Cantor-Zassenhaus with the trace map, as the field has characteristic 2).
"""

from __future__ import annotations

import random

from .gf2k import Field

__all__ = [
    "trim", "uadd", "umul", "udivmod", "ugcd", "umonic", "upowmod", "uderiv",
    "squarefree", "factor", "roots", "is_irreducible", "ueval", "from_poly", "to_poly",
]

U = list[int]


def trim(a: U) -> U:
    while a and a[-1] == 0:
        a.pop()
    return a


def uadd(a: U, b: U) -> U:
    if len(a) < len(b):
        a, b = b, a
    r = list(a)
    for i, c in enumerate(b):
        r[i] ^= c
    return trim(r)


def umul(F: Field, a: U, b: U) -> U:
    if not a or not b:
        return []
    r = [0] * (len(a) + len(b) - 1)
    mul = F.mul
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    r[i + j] ^= mul(x, y)
    return trim(r)


def uscale(F: Field, a: U, c: int) -> U:
    return trim([F.mul(x, c) for x in a])


def udivmod(F: Field, a: U, b: U) -> tuple[U, U]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    db = len(b) - 1
    inv = F.inv(b[-1])
    q = [0] * max(len(a) - db, 0)
    mul = F.mul
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i]
        if c:
            c = mul(c, inv)
            q[i - db] = c
            for j, y in enumerate(b):
                if y:
                    a[i - db + j] ^= mul(c, y)
    return trim(q), trim(a[:db])


def umod(F: Field, a: U, b: U) -> U:
    return udivmod(F, a, b)[1]


def umonic(F: Field, a: U) -> U:
    if not a or a[-1] == 1:
        return list(a)
    return uscale(F, a, F.inv(a[-1]))


def ugcd(F: Field, a: U, b: U) -> U:
    while b:
        a, b = b, umod(F, a, b)
    return umonic(F, a)


def upowmod(F: Field, a: U, e: int, m: U) -> U:
    r = [1]
    a = umod(F, a, m)
    while e:
        if e & 1:
            r = umod(F, umul(F, r, a), m)
        e >>= 1
        if e:
            a = umod(F, umul(F, a, a), m)
    return r


def uderiv(a: U) -> U:
    return trim([a[i] if i & 1 else 0 for i in range(1, len(a))])


def ueval(F: Field, a: U, x: int) -> int:
    acc = 0
    for c in reversed(a):
        acc = F.mul(acc, x) ^ c
    return acc


def _frobenius_root(F: Field, a: U) -> U:
    """h with h^2 = a, for a with only even-degree terms."""
    return [F.sqrt(a[i]) for i in range(0, len(a), 2)]


def squarefree(F: Field, f: U) -> list[tuple[U, int]]:
    """Square-free decomposition of a monic polynomial: [(g, multiplicity)]."""
    f = umonic(F, f)
    if len(f) <= 1:
        return []
    out: dict[int, U] = {}

    def rec(f: U, mult: int) -> None:
        if len(f) <= 1:
            return
        d = uderiv(f)
        if not d:
            rec(_frobenius_root(F, f), 2 * mult)
            return
        c = ugcd(F, f, d)
        w = udivmod(F, f, c)[0]
        i = 1
        while len(w) > 1:
            y = ugcd(F, w, c)
            z = udivmod(F, w, y)[0]
            if len(z) > 1:
                prev = out.get(i * mult, [1])
                out[i * mult] = umul(F, prev, z)
            i += 1
            w = y
            c = udivmod(F, c, y)[0]
        if len(c) > 1:
            rec(_frobenius_root(F, c), 2 * mult)

    rec(f, 1)
    return [(g, m) for m, g in sorted(out.items())]


def _ddf(F: Field, f: U) -> list[tuple[U, int]]:
    """Distinct-degree factorization of a square-free monic f."""
    q = F.order
    out = []
    h = [0, 1]
    x = [0, 1]
    d = 0
    while len(f) - 1 >= 2 * (d + 1):
        d += 1
        h = upowmod(F, h, q, f)
        g = ugcd(F, f, uadd(h, x))
        if len(g) > 1:
            out.append((g, d))
            f = udivmod(F, f, g)[0]
            h = umod(F, h, f)
    if len(f) > 1:
        out.append((f, len(f) - 1))
    return out


def _edf(F: Field, f: U, d: int, rng: random.Random) -> list[U]:
    """Split a monic product of distinct degree-d irreducibles."""
    n = len(f) - 1
    if n == d:
        return [f]
    kd = F.degree * d
    while True:
        a = trim([rng.randrange(F.order) for _ in range(n)])
        if len(a) <= 1:
            continue
        # trace map a + a^2 + ... + a^(2^(kd-1)) mod f
        t = list(a)
        s = list(a)
        for _ in range(kd - 1):
            s = umod(F, umul(F, s, s), f)
            t = uadd(t, s)
        g = ugcd(F, f, t)
        if 1 < len(g) < len(f):
            h = udivmod(F, f, g)[0]
            return _edf(F, g, d, rng) + _edf(F, h, d, rng)


def _sort_key(g: U) -> tuple:
    return (len(g), tuple(reversed(g)))


def factor(F: Field, f: U, seed: int = 0) -> list[tuple[U, int]]:
    """Monic irreducible factors with multiplicities, deterministically ordered.

    The leading coefficient is dropped (factors recombine to f up to a unit).
    """
    f = trim(list(f))
    if not f:
        raise ValueError("cannot factor the zero polynomial")
    rng = random.Random(seed)
    out = []
    for g, m in squarefree(F, f):
        for h, d in _ddf(F, g):
            for p in _edf(F, h, d, rng):
                out.append((p, m))
    out.sort(key=lambda t: (_sort_key(t[0]), t[1]))
    return out


def roots(F: Field, f: U, seed: int = 0) -> list[int]:
    """Distinct roots in F, sorted."""
    return sorted(p[0] for p, _ in factor(F, f, seed) if len(p) == 2)


def is_irreducible(F: Field, f: U) -> bool:
    n = len(f) - 1
    if n < 1:
        return False
    f = umonic(F, f)
    if n == 1:
        return True
    q = F.order
    x = [0, 1]
    h = x
    for i in range(1, n // 2 + 1):
        h = upowmod(F, h, q, f)
        if len(ugcd(F, f, uadd(h, x))) > 1:
            return False
    return True


def from_poly(p) -> U:
    """Coefficient list of a univariate :class:`Poly` (one variable in use)."""
    used = [i for i in range(p.ring.nvars) if any(e[i] for e in p.terms)]
    if len(used) > 1:
        raise ValueError(f"{p} is not univariate")
    if not p.terms:
        return []
    i = used[0] if used else 0
    deg = max(e[i] for e in p.terms)
    r = [0] * (deg + 1)
    for e, c in p.terms.items():
        if e[i] < 0:
            raise ValueError("negative exponent")
        r[e[i]] = c
    return trim(r)


def to_poly(a: U, ring, name: str):
    from .poly import Poly

    i = ring.index(name)
    n = ring.nvars
    terms = {}
    for k, c in enumerate(a):
        if c:
            e = [0] * n
            e[i] = k
            terms[tuple(e)] = c
    return Poly(ring, terms)
