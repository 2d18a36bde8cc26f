import pytest
from hypothesis import given, strategies as st

from enrcov.gf2k import (Field, ReducibleModulus, embedder, extension, field, gf,
                         is_irreducible2)
from enrcov.grammar import ParseError, parse_poly
from enrcov.poly import Ring
from enrcov.univariate import factor, is_irreducible, roots, trim, umul
from helpers import GF4, polys


# --- fields ---------------------------------------------------------------

def test_gf4_from_modulus():
    F = field(0b111)
    assert F.order == 4
    w = F.gen
    assert w * w == w + 1


def test_default_field_is_gf2():
    F = field()
    assert F.order == 2 and F.degree == 1


def test_reducible_modulus_rejected():
    with pytest.raises(ReducibleModulus) as err:
        field(0b101)  # w^2 + 1 = (w + 1)^2
    assert str(err.value).startswith("reducible") and "(w+1)" in str(err.value)


def test_gf4_inverse_and_sqrt():
    w = GF4.gen
    assert GF4.inv(w.value) == (w + 1).value
    assert GF4.sqrt(w.value) == (w + 1).value
    assert (w + 1) * (w + 1) == w


def test_inverse_of_zero():
    with pytest.raises(ZeroDivisionError):
        GF4.inv(0)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_frobenius_exhaustive(k):
    F = gf(k)
    for a in F.elements():
        s = F.sqrt(a)
        assert F.mul(s, s) == a
        assert F.pow(a, F.order) == a


@given(st.integers(5, 16), st.data())
def test_frobenius_sampled(k, data):
    F = gf(k)
    a = data.draw(st.integers(0, F.order - 1))
    s = F.sqrt(a)
    assert F.mul(s, s) == a
    assert F.pow(a, F.order) == a or a == 0


@given(st.data())
def test_embedding_is_a_ring_map(data):
    small, big = gf(2), gf(4)
    f = embedder(small, big)
    a, b = data.draw(st.integers(0, 3)), data.draw(st.integers(0, 3))
    assert f(a ^ b) == f(a) ^ f(b)
    assert f(small.mul(a, b)) == big.mul(f(a), f(b))


def test_extension_degrees():
    assert extension(gf(1), 2).degree == 2
    assert extension(gf(2), 2).degree == 4
    assert is_irreducible2(0b10011)


# --- polynomials ----------------------------------------------------------

R_t = Ring.make(["t"])


def test_freshmans_dream():
    t = R_t.var("t")
    assert (t + 1) ** 4 == t ** 4 + 1


def test_product_of_example_coefficients():
    # A = t^3 (t+1), B = t^3 (t+1)^3
    t = R_t.var("t")
    A, B = t ** 3 * (t + 1), t ** 3 * (t + 1) ** 3
    assert A * B == t ** 10 + t ** 6
    assert (A * R_t.zero()).is_zero()


def test_derivatives():
    t = R_t.var("t")
    assert (t * (t + 1) ** 4).derivative("t") == (t + 1) ** 4
    A, B = t ** 3 * (t + 1), t ** 3 * (t + 1) ** 3
    assert (A * B).derivative("t").is_zero()
    R = Ring.make(["y"])
    assert (R.var("y") ** 2).derivative("y").is_zero()


def test_inverted_derivative_rule():
    R = Ring.make(["t"], ["t"])
    t = R.var("t")
    assert (R.one() / t).derivative("t") == R.one() / (t * t)


def test_substitute_weierstrass_chart_change():
    R = Ring.make(["x", "y", "t"])
    F = R.parse("y^2 + t^6*y + x^3 + (t^2 + t^6)*x + t^7")
    S = Ring.make(["x0", "y0", "t"], ["x0", "t"])
    x0, y0, t = S.var("x0"), S.var("y0"), S.var("t")
    G = F.substitute({"x": t * t / x0, "y": t * t * y0 / (x0 * x0), "t": t}, S)
    G = G * x0 ** 4 / t ** 4
    expect = S.parse("y0^2 + t^4*x0^2*y0 + x0^3 + t^2*x0 + t^4*x0^3 + t^3*x0^4")
    assert G == expect


def test_substitute_identity_and_inverse():
    R = Ring.make(["x", "y"])
    f = R.parse("x^2*y + y + 1")
    assert f.substitute({"x": R.var("x"), "y": R.var("y")}, R) == f
    S = Ring.make(["s"])
    T = Ring.make(["t"], ["t"])
    g = S.parse("s^2 + s").substitute({"s": T.one() / T.var("t")}, T)
    cleared, shift = g.clear_denominators()
    assert cleared == T.parse("1 + t") and shift == (2,)


def test_evaluate():
    R = Ring.make(["t"], fld=GF4)
    w = GF4.gen
    assert R.parse("t^2 + t + 1").evaluate({"t": w}).value == 0
    assert R.const(3).evaluate({"t": 0}).value == 3
    E = Ring.make(["e1", "e2", "t"], fld=GF4)
    assert E.parse("e1*t*(t+1) + e2").evaluate({"e1": 2, "e2": 3, "t": 0}).value == 3


def test_evaluate_zero_at_inverted_variable():
    R = Ring.make(["t"], ["t"])
    with pytest.raises(ZeroDivisionError):
        R.parse("t + 1").evaluate({"t": 0})


def test_truncate():
    R = Ring.make(["x", "y", "z"])
    assert R.parse("z^2 + x^3 + y^7 + x^9").truncate(7) == R.parse("z^2 + x^3 + y^7")
    assert R.zero().truncate(3).is_zero()
    assert R.parse("x + x*y").truncate(1) == R.var("x")
    assert R.parse("x^3 + y^2").truncate(6, (2, 3, 1)) == R.parse("x^3 + y^2")


R3 = Ring.make(["x", "y", "z"], fld=GF4)


@given(polys(R3), polys(R3))
def test_frobenius_additive(f, g):
    assert (f + g) ** 2 == f ** 2 + g ** 2


@given(polys(R3), polys(R3), st.sampled_from(["x", "y", "z"]))
def test_leibniz_partial(f, g, v):
    assert (f * g).derivative(v) == f * g.derivative(v) + g * f.derivative(v)


@given(polys(R3), polys(R3), polys(R3))
def test_ring_axioms(f, g, h):
    assert f * (g + h) == f * g + f * h
    assert (f * g) * h == f * (g * h)
    assert f + f == R3.zero()


# --- grammar --------------------------------------------------------------

def test_grammar_basics():
    R = Ring.make(["x", "t"], ["t"], fld=GF4)
    assert parse_poly("x - 1", R) == parse_poly("x + 1", R)
    assert parse_poly("3*x", R) == R.var("x")
    assert parse_poly("w*x", R) == R.var("x").scale(2)
    assert parse_poly("x/t^2", R) == R.var("x") / R.var("t") ** 2


def test_grammar_errors_have_positions():
    R = Ring.make(["x", "y"])
    with pytest.raises(ParseError) as err:
        parse_poly("x + q", R, line=4)
    assert err.value.line == 4 and err.value.col == 5
    with pytest.raises(ParseError):
        parse_poly("x/y", R)  # y is not inverted


# --- univariate factorisation ----------------------------------------------

def test_factor_examples():
    F2 = gf(1)
    assert factor(F2, [1, 1, 1]) == [([1, 1, 1], 1)]
    w = GF4.gen.value
    assert sorted(factor(GF4, [1, 1, 1])) == sorted([([w, 1], 1), ([w ^ 1, 1], 1)])
    assert sorted(factor(F2, [0, 0, 1, 0, 1])) == [([0, 1], 2), ([1, 1], 2)]
    assert sorted(roots(GF4, [1, 1, 1])) == [2, 3]


def _recombine(F: Field, facs):
    acc = [1]
    for f, m in facs:
        for _ in range(m):
            acc = umul(F, acc, f)
    return acc


@given(st.sampled_from([1, 2, 3]), st.lists(st.integers(0, 7), min_size=2, max_size=10))
def test_factor_recombines(k, coeffs):
    F = gf(k)
    f = trim([c % F.order for c in coeffs])
    if len(f) < 2:
        return
    lead = f[-1]
    monic = [F.div(c, lead) for c in f]
    facs = factor(F, f)
    assert _recombine(F, facs) == monic
    assert all(is_irreducible(F, g) for g, _ in facs)
