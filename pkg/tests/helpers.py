"""Hypothesis strategies shared by the test modules."""

from hypothesis import strategies as st

from enrcov.gf2k import gf
from enrcov.poly import Poly, Ring


def field_elements(W):
    return st.integers(min_value=0, max_value=W.order - 1)


@st.composite
def polys(draw, R: Ring, max_terms: int = 5, max_exp: int = 3):
    n = R.nvars
    terms = draw(st.dictionaries(
        st.tuples(*[st.integers(0, max_exp)] * n),
        st.integers(1, R.field.order - 1), max_size=max_terms))
    return Poly(R, terms)


GF4 = gf(2)


def _det3(W, M):
    m = W.mul
    return (m(M[0][0], m(M[1][1], M[2][2]) ^ m(M[1][2], M[2][1]))
            ^ m(M[0][1], m(M[1][0], M[2][2]) ^ m(M[1][2], M[2][0]))
            ^ m(M[0][2], m(M[1][0], M[2][1]) ^ m(M[1][1], M[2][0])))


def random_coordinate_change(R: Ring, rnd, extra_terms: int = 3, max_deg: int = 2) -> dict:
    """Images of x, y, z under an invertible linear map plus a few random
    monomials of degree 2..max_deg."""
    W = R.field
    while True:
        M = [[rnd.randrange(W.order) for _ in range(3)] for _ in range(3)]
        if _det3(W, M):
            break
    g = R.gens()
    imgs = {}
    for i, n in enumerate(R.names):
        p = R.zero()
        for j in range(3):
            p = p + g[j].scale(M[i][j])
        for _ in range(extra_terms):
            e = [0, 0, 0]
            for _ in range(rnd.randint(2, max_deg)):
                e[rnd.randrange(3)] += 1
            p = p + R.monomial(tuple(e), rnd.randrange(1, W.order))
        imgs[n] = p
    return imgs


def perturb(F: Poly, rnd) -> Poly:
    """F in random coordinates, times a random unit 1 + a x + b z."""
    R = F.ring
    G = F.substitute(random_coordinate_change(R, rnd), R)
    W = R.field
    unit = R.one() + R.monomial((1, 0, 0), rnd.randrange(W.order)) + R.monomial((0, 0, 1), rnd.randrange(W.order))
    return G * unit
