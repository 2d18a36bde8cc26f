"""Lengths of local algebras k[[x]]/I at the origin.

The computation works in k[x]/(I + m^N).  When no standard monomial of
degree N-1 survives, m^(N-1) lies in I + m^N, so Nakayama gives
m^(N-1) inside I locally and the length is final.  Otherwise N is doubled.
"""

from __future__ import annotations

from itertools import combinations_with_replacement
from typing import Mapping, Sequence

from .groebner import _divides, buchberger
from .poly import Poly

__all__ = ["NonIsolated", "local_length", "local_length_at", "local_standard_monomials"]

MAX_ORDER = 96


class NonIsolated(ValueError):
    pass


def local_key(e):
    """Local degree order: lower total degree leads, lex breaks ties."""
    return (-sum(e),) + tuple(e)


def _truncated_staircase(gens: Sequence[Poly], N: int):
    ring = gens[0].ring
    n = ring.nvars
    key = local_key
    polys = []
    for g in gens:
        t = {e: c for e, c in g.terms.items() if sum(e) < N}
        if t:
            polys.append(t)
    basis = buchberger(ring.field, polys, key, trunc=N)
    lms = [b.lm for b in basis]
    if lms and not any(lms[0]) and len(lms) == 1:
        return [], 0
    std = []
    top = 0
    for d in range(N):
        found = False
        for combo in combinations_with_replacement(range(n), d):
            e = [0] * n
            for i in combo:
                e[i] += 1
            e = tuple(e)
            if not any(_divides(lm, e) for lm in lms):
                std.append(e)
                found = True
        if found:
            top = d
        else:
            break  # order ideal: nothing above an empty degree
    return std, top


def local_standard_monomials(gens: Sequence[Poly], start: int = 8, cap: int = MAX_ORDER):
    """Standard monomials spanning k[[x]]/I (I must be m-primary there)."""
    gens = [g for g in gens if g]
    if not gens:
        raise NonIsolated("zero ideal")
    for g in gens:
        if g.is_laurent():
            raise ValueError("local computations need polynomial generators")
    N = start
    while True:
        std, top = _truncated_staircase(gens, N)
        if not std or top < N - 1:
            return std
        if N >= cap:
            raise NonIsolated(f"local algebra not finite below order {cap}")
        N = min(2 * N, cap)


def local_length(gens: Sequence[Poly], start: int = 8, cap: int = MAX_ORDER) -> int:
    """dim_k k[[x]]/(gens) at the origin; 0 when some generator is a unit."""
    return len(local_standard_monomials(gens, start, cap))


def local_length_at(gens: Sequence[Poly], point: Mapping[str, int], **kw) -> int:
    """Length at a rational point, given as variable -> raw field value."""
    moved = [g.translate(point) for g in gens]
    return local_length(moved, **kw)
