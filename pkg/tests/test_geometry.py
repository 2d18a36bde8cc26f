import dataclasses

import pytest

from enrcov.geometry import (Chart, _rank, NotSingular, SurfaceAtlas, hasse_coefficient_at_fiber,
                             jacobian, local_model, quadric_pair_hasse, singular_locus,
                             singular_points, validate_atlas, validate_chart, validate_transition)
from enrcov.gf2k import gf
from enrcov.poly import Ring
from enrcov.singclass import classify_point

W4 = gf(2)


def _chart(name, names, rels, inverted=(), **kw):
    R = Ring.make(list(names), list(inverted))
    return Chart(name, R, tuple(R.parse(r) for r in rels), **kw)


# --- validation ------------------------------------------------------------

def test_weierstrass_chart_is_valid(ex):
    rep = validate_chart(ex("12A1").atlas.chart("x1"))
    assert rep.ok and rep.info["dimension"] == 2


def test_unit_helper_chart_is_valid(ex):
    rep = validate_chart(ex("12A1").atlas.chart("main"))
    assert rep.ok, rep.problems


def test_quadric_pair_chart_is_valid(ex):
    rep = validate_chart(ex("E12").atlas.chart("sX1"))
    assert rep.ok and rep.info == {"nvars": 4, "nrelations": 2, "dimension": 2}


def test_curve_is_not_a_surface():
    rep = validate_chart(_chart("c", "xyz", ["x*y + z", "x + y^2"]))
    assert not rep.ok
    assert any("dimension 1" in p for p in rep.problems)


def test_unit_ideal_chart_rejected():
    rep = validate_chart(_chart("e", "xyt", ["x*t + 1", "t"]))
    assert not rep.ok and any("empty" in p for p in rep.problems)


@pytest.mark.parametrize("name", ["12A1", "D12", "3D4", "E12", "D4D8-same-fiber"])
def test_builtin_atlases_validate(ex, name):
    rep = validate_atlas(ex(name).atlas)
    assert rep.ok, rep.problems


@pytest.mark.parametrize("name,pair", [("D12", ("main", "x0")), ("D12", ("x0", "main")),
                                       ("12A1", ("main", "x1")), ("12A1", ("main", "sc"))])
def test_transitions_validate(ex, name, pair):
    atlas = ex(name).atlas
    assert validate_transition(atlas, atlas.transition(*pair)).ok


def test_corrupted_transition_names_relation(ex):
    atlas = ex("D12").atlas
    T = atlas.transition("main", "x0")
    R = T.overlap_ring(atlas.chart("main"))
    bad = dataclasses.replace(T, images={**T.images, "x0": R.parse("t^3/x")})
    rep = validate_transition(atlas, bad)
    assert not rep.ok
    rel = str(atlas.chart("x0").relations[0])
    assert any(p.startswith(f"relation {rel} does not pull back") for p in rep.problems)


def test_disconnected_atlas_detected(ex):
    atlas = ex("D12").atlas
    cut = SurfaceAtlas(atlas.name, atlas.charts,
                       tuple(T for T in atlas.transitions if "sc" not in (T.source, T.target)))
    rep = validate_atlas(cut)
    assert "transition graph is not connected" in rep.problems


# --- singular locus --------------------------------------------------------

def test_smooth_chart_has_unit_locus():
    assert singular_locus(_chart("u", "xyz", ["x*y + 1"], inverted="xy")).is_unit()


# three quadrics cutting out a surface in P^5 with a single E12 point at
# (1:0:1:0:0:0); coordinates x1, x2, x3, y1, y2, y3
_P5 = ["x1^2 + x3^2 + y1^2 + x2*y3 + x3*y2",
       "x2^2 + y1^2 + y3^2 + x1*y3 + x3*y1",
       "y2^2 + x1*y2 + x2*y1"]


def test_affine_cone_singular_locus_contains_point():
    cone = _chart("cone", ["x1", "x2", "x3", "y1", "y2", "y3"], _P5, expected_dim=3)
    gb = singular_locus(cone)
    pt = dict(x1=1, x2=0, x3=1, y1=0, y2=0, y3=0)
    assert all(p.evaluate(pt).value == 0 for p in gb.polys)
    # a generic point of the cone is not singular
    assert any(p.evaluate(dict(x1=1, x2=0, x3=0, y1=1, y2=0, y3=0)).value for p in gb.polys)


def test_p5_affine_piece_has_one_e12_point():
    rels = [r.replace("x1^2", "1").replace("x1*", "") for r in _P5]
    piece = _chart("x1", ["x2", "x3", "y1", "y2", "y3"], rels, expected_dim=2)
    atlas = SurfaceAtlas("P5", (piece,))
    assert validate_chart(piece).ok
    pts = singular_points(atlas)
    assert [p.as_dict() for p in pts] == [dict(x2=0, x3=1, y1=0, y2=0, y3=0)]
    assert str(classify_point(atlas, pts[0])) == "EDP_E12"


@pytest.mark.parametrize("name,count", [("D12", 1), ("12A1", 6), ("D4D8-same-fiber", 2),
                                        ("3D4", 3), ("E12", 1)])
def test_singular_point_counts(ex, name, count):
    assert len(singular_points(ex(name).atlas)) == count


def test_12a1_point_positions(ex):
    got = {(p.chart, p.value("t")) for p in singular_points(ex("12A1").atlas)}
    w = W4.gen.value
    assert got == {("main", w), ("main", w ^ 1), ("x1", 0), ("x1", 1), ("x2", 0), ("x2", 1)}


@pytest.mark.parametrize("name", ["12A1", "3D4", "E12", "D4D8-same-fiber"])
def test_points_satisfy_relations_and_minors(ex, name):
    atlas = ex(name).atlas
    for p in singular_points(atlas):
        ch = atlas.chart(p.chart)
        vals = p.as_dict()
        for r in ch.relations:
            assert r.map_field(p.field).evaluate(vals).value == 0
        J = jacobian(ch.relations, ch.names)
        # Jacobian rank drops: the rows are dependent at the point
        M = [[d.map_field(p.field).evaluate(vals).value for d in row] for row in J]
        assert _rank(p.field, M) < len(ch.relations)


# --- local models ----------------------------------------------------------

def test_hypersurface_local_model_is_translate(ex):
    atlas = ex("D12").atlas
    (p,) = singular_points(atlas)
    lm = local_model(atlas, p)
    assert lm.exact and lm.eliminated == ()
    assert lm.jet == atlas.chart("x0").relations[0].map_field(p.field)


def test_complete_intersection_eliminates_base(ex):
    atlas = ex("E12").atlas
    (p,) = singular_points(atlas)
    lm = local_model(atlas, p, order=12)
    assert lm.eliminated == ("s",) and lm.names == ("x2", "x3", "y3")
    assert lm.jet.order() == 2 and lm.jet.total_degree() < 12
    assert str(classify_point(atlas, p)) == "EDP_E12"


def test_smooth_point_rejected(ex):
    atlas = ex("D12").atlas
    p = dataclasses.replace(singular_points(atlas)[0], coords=(0, 0, 1))
    assert atlas.chart("x0").relations[0].map_field(p.field).evaluate(p.as_dict()).value == 0
    with pytest.raises(NotSingular):
        local_model(atlas, p)


# --- fibers ----------------------------------------------------------------

def test_hasse_coefficients(ex):
    w = W4.gen
    assert hasse_coefficient_at_fiber(ex("12A1").atlas.chart("main"), w).value == 1
    assert hasse_coefficient_at_fiber(ex("D12").atlas.chart("main"), w).value == 0
    assert hasse_coefficient_at_fiber(ex("3D4").atlas.chart("main"), w).value == 0


def test_quadric_pair_hasse_on_e12(ex):
    atlas = ex("E12").atlas
    for v in W4.elements():
        assert quadric_pair_hasse(atlas.chart("sX1"), W4.element(v)).value == 0
