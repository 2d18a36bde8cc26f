import pytest
from hypothesis import given, strategies as st

from enrcov.derivation import combine, is_fixed_point_free
from enrcov.examples import builtin_registry
from enrcov.gf2k import gf
from enrcov.liealg import (CANONICAL, LieAxiomError, Lie2Structure, build_structure,
                           classify_type, p_closed_cubic, p_closed_lines, square_coords)
from enrcov.poly import Ring

F2, F4 = gf(1), gf(2)


def _form(text, fld=F2):
    return Ring.make(["e1", "e2"], fld=fld).parse(text)


# --- structure data from derivations --------------------------------------------

def test_structure_of_12a1(ex):
    s = ex("12A1")
    S = build_structure(s.D1, s.D2)
    assert (S.bracket, S.s1, S.s2) == ((0, 1), (1, 0), (0, 0))


@pytest.mark.parametrize("name", ["D12", "E12", "3D4"])
def test_zero_structures(ex, name):
    s = ex(name)
    S = build_structure(s.D1, s.D2)
    assert (S.bracket, S.s1, S.s2) == ((0, 0), (0, 0), (0, 0))


def test_build_checks_polarisation_with_several_seeds(ex):
    s = ex("8A1+D4")
    assert build_structure(s.D1, s.D2, checks=6, seed=1) == build_structure(s.D1, s.D2, seed=2)


# --- the cubic -----------------------------------------------------------------------

def test_cubic_type5():
    assert p_closed_cubic(CANONICAL[5]) == _form("e1^2*e2 + e1*e2^2")


def test_cubic_type4():
    assert p_closed_cubic(CANONICAL[4]) == _form("e1^3")


@pytest.mark.parametrize("t", [1, 2])
def test_cubic_vanishes_for_types_1_and_2(t):
    assert p_closed_cubic(CANONICAL[t]).is_zero()


# --- lines ---------------------------------------------------------------------------

def test_type1_lines():
    census = p_closed_lines(CANONICAL[1])
    assert census.all_closed and census.signature() == "all/1 additive"
    (line,) = census.additive
    assert line.point == (0, 1)


def test_type5_lines():
    census = p_closed_lines(CANONICAL[5])
    assert not census.all_closed
    assert sorted(l.point for l in census.lines) == [(0, 1), (1, 0), (1, 1)]
    assert all(l.kind == "multiplicative" for l in census.lines)


def test_zero_structure_all_additive():
    census = p_closed_lines(CANONICAL[2])
    assert census.all_closed and census.additive == "all"
    assert census.signature() == "all additive"


@pytest.mark.parametrize("t,sig", [(3, (1, 1)), (4, (0, 1)), (5, (3, 0))])
def test_signatures(t, sig):
    assert p_closed_lines(CANONICAL[t]).counts() == sig


@pytest.mark.parametrize("t", [1, 2, 3, 4, 5])
def test_canonical_types(t):
    assert classify_type(CANONICAL[t]) == t


def test_type5_over_gf4_still_three_lines():
    census = p_closed_lines(CANONICAL[5].to_field(F4))
    assert census.counts() == (3, 0)


def test_inconsistent_data_rejected():
    # [x, y] = x with zero squares: the cubic vanishes but no line is additive-only
    with pytest.raises(LieAxiomError):
        classify_type(Lie2Structure(F2, (1, 0), (0, 0), (0, 0)))


def test_irreducible_cubic_needs_extension():
    # x^[2] = y, y^[2] = x + y: the cubic e1^3 + e1^2 e2 + e2^3 has no root over GF(2)
    S = Lie2Structure(F2, (0, 0), (0, 1), (1, 1))
    census = p_closed_lines(S)
    assert census.lines and census.lines[0].field.degree == 3
    assert classify_type(S) == 5


@given(st.integers(0, 3), st.integers(0, 3))
def test_square_coords_match_polarisation(a, b):
    S = CANONICAL[1].to_field(F4)
    m = F4.mul
    got = square_coords(S, a, b)
    want = tuple(m(m(a, a), S.s1[i]) ^ m(m(b, b), S.s2[i]) ^ m(m(a, b), S.bracket[i]) for i in range(2))
    assert got == want


# --- example-level consistency -----------------------------------------------------

def test_12a1_additive_line_is_fixed_point_free(ex):
    s = ex("12A1")
    (line,) = p_closed_lines(build_structure(s.D1, s.D2)).additive
    e1, e2 = (line.field.element(v) for v in line.point)
    assert is_fixed_point_free(combine([(e1, s.D1), (e2, s.D2)]))


@pytest.mark.parametrize("spec", builtin_registry(), ids=lambda s: s.name)
def test_declared_lie_types(spec):
    assert classify_type(build_structure(spec.D1, spec.D2)) == int(spec.expect["lie-type"])
