import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helecell import geometry as geo
from helecell.errors import CuspError, CurveInvariantError, DegenerateEdgeError
from oracles import ray_cast_inside, star_polygon

UNIT_SQUARE = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])
# L-shaped hexagon; the notch is the square [1, 2] x [1, 2]
L_SHAPE = np.array([[0, 0], [2, 0], [2, 1], [1, 1], [1, 2], [0, 2]], dtype=float)


def test_hexagon_curvature():
    g = geo.build_geometry(geo.regular_polygon(6))
    np.testing.assert_allclose(g.curvature, 2 * np.tan(np.pi / 6), rtol=1e-14)
    np.testing.assert_allclose(g.curvature, 1 / np.cos(np.pi / 6), rtol=1e-14)


def test_square_corner_frame():
    g = geo.build_geometry(geo.PolygonalCurve(UNIT_SQUARE))
    # vertex 1 = (1, 0) joins edge directions (1, 0) and (0, 1)
    np.testing.assert_allclose(g.vertex_tangent[1], np.array([1, 1]) / np.sqrt(2), atol=1e-15)
    np.testing.assert_allclose(g.vertex_normal[1], np.array([1, -1]) / np.sqrt(2), atol=1e-15)
    np.testing.assert_allclose(g.exterior_angle, np.pi / 2)


def test_flat_vertex_contributes_nothing():
    x = np.array([[0, 0], [1, 0], [2, 0], [2, 1], [0, 1]], dtype=float)
    g = geo.build_geometry(geo.PolygonalCurve(x))
    assert g.exterior_angle[1] == 0.0
    assert g.half_tan[1] == 0.0
    # edge 2 (from vertex 1 to 2) only sees the corner at vertex 2
    assert g.curvature[2] == pytest.approx(g.half_tan[2] / g.edge_length[2])


def test_square_metrics():
    c = geo.PolygonalCurve(UNIT_SQUARE)
    g = geo.build_geometry(c)
    assert g.area == pytest.approx(1.0) and geo.area(c) == pytest.approx(1.0)
    assert g.perimeter == pytest.approx(4.0) and geo.perimeter(c) == pytest.approx(4.0)
    np.testing.assert_allclose(g.barycenter, [0.5, 0.5])
    np.testing.assert_allclose(geo.barycenter(c), [0.5, 0.5])


@pytest.mark.parametrize("n,radius", [(3, 1.0), (7, 2.5), (100, 1.0)])
def test_regular_polygon_area(n, radius):
    c = geo.regular_polygon(n, radius)
    assert geo.area(c) == pytest.approx(0.5 * n * radius ** 2 * np.sin(2 * np.pi / n), rel=1e-13)


def test_translation_invariance():
    c = geo.PolygonalCurve(L_SHAPE)
    shift = np.array([3.5, -1.25])
    a, b = geo.build_geometry(c), geo.build_geometry(c.translated(shift))
    assert b.area == pytest.approx(a.area, rel=1e-14)
    assert b.perimeter == pytest.approx(a.perimeter, rel=1e-14)
    np.testing.assert_allclose(b.barycenter, a.barycenter + shift, rtol=1e-13)
    np.testing.assert_allclose(b.curvature, a.curvature, rtol=1e-12)


def test_point_in_polygon_square():
    c = geo.PolygonalCurve(UNIT_SQUARE)
    assert geo.point_in_polygon(c, (0.5, 0.5))
    assert not geo.point_in_polygon(c, (2.0, 2.0))


def test_point_in_notch_of_l_shape():
    c = geo.PolygonalCurve(L_SHAPE)
    p = (1.5, 1.5)
    assert ray_cast_inside(L_SHAPE, p) is False
    assert geo.point_in_polygon(c, p) is False
    assert geo.point_in_polygon(c, (0.5, 1.5))


def test_inside_tests_match_ray_casting(rng):
    pts = rng.uniform(-0.5, 2.5, size=(2000, 2))
    expect = np.array([ray_cast_inside(L_SHAPE, p) for p in pts])
    np.testing.assert_array_equal(geo.points_in_polygon(L_SHAPE, pts), expect)
    np.testing.assert_array_equal(np.abs(geo.winding_angles(L_SHAPE, pts) - 2 * np.pi) < np.pi, expect)


def test_cyclic_relabeling():
    x = star_polygon(1 + 0.2 * np.cos(3 * np.linspace(0, 2 * np.pi, 40, endpoint=False)))
    c = geo.PolygonalCurve(x)
    a = geo.build_geometry(c)
    for shift in (1, 7, -3):
        b = geo.build_geometry(c.rolled(shift))
        for name in ("edge_length", "curvature", "exterior_angle", "half_cos", "vertex_tangent", "midpoint"):
            np.testing.assert_allclose(getattr(b, name), np.roll(getattr(a, name), shift, axis=0), atol=1e-14)
        assert b.area == pytest.approx(a.area, rel=1e-14)


def test_invalid_curves():
    with pytest.raises(DegenerateEdgeError):
        geo.PolygonalCurve([[0, 0], [1, 0], [1, 0], [0, 1]])
    with pytest.raises(CurveInvariantError):
        geo.PolygonalCurve(UNIT_SQUARE[::-1])
    with pytest.raises(CurveInvariantError):
        geo.PolygonalCurve([[0, 0], [1, 0]])
    with pytest.raises(CurveInvariantError):
        geo.PolygonalCurve([[0, 0], [1, 0], [np.nan, 1]])


def test_cusp_detected():
    # edge (2,0)->(2,2) is followed by (2,2)->(2,1): a full fold
    x = [[0, 0], [2, 0], [2, 2], [2, 1], [0, 1]]
    with pytest.raises(CuspError):
        geo.build_geometry(geo.PolygonalCurve(x))


def test_vertices_read_only():
    c = geo.regular_polygon(5)
    with pytest.raises(ValueError):
        c.vertices[0, 0] = 3.0


def test_curvature_sign_changes():
    assert geo.curvature_sign_changes(np.ones(10)) == 0
    assert geo.curvature_sign_changes(np.array([1, -1, 1, -1.0])) == 4
    assert geo.curvature_sign_changes(np.array([1, 0, 1, -2, -1, 0.0])) == 2


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(0.3, 2.0), min_size=5, max_size=40),
       st.lists(st.tuples(st.floats(-2.5, 2.5), st.floats(-2.5, 2.5)), min_size=1, max_size=30))
def test_star_polygons(radii, points):
    x = star_polygon(radii)
    c = geo.PolygonalCurve(x)
    g = geo.build_geometry(c)
    # exterior angles of a simple closed anti-clockwise curve sum to 2 pi
    assert g.exterior_angle.sum() == pytest.approx(2 * np.pi, abs=1e-9)
    assert g.area == pytest.approx(geo.area(c), rel=1e-12)
    pts = np.array(points)
    got = geo.points_in_polygon(x, pts)
    for p, inside in zip(pts, got):
        d = np.min(np.hypot(*(x - p).T))
        if d > 1e-6:
            assert inside == ray_cast_inside(x, p)
